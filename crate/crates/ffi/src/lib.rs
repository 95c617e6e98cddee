//! C ABI for cubicfields.
//!
//! Every fallible call returns a `CfStatus`; on failure the message is kept
//! per thread and read back with `cf_last_error`. Censuses are opaque handles
//! owned by the caller and released with `cf_census_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use cubicfields::census::{self, Census};
use cubicfields::constants;
use cubicfields::datastore;
use cubicfields::invariants::{self, InvariantExponents};
use cubicfields::localmass::{InfSet, SplittingConstraint};
use cubicfields::resolvent::{build_phi, phi_coefficients};
use cubicfields::{BinaryCubicForm, CubicFieldRecord, Error, Signature};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Capacity = 3,
    Integrity = 4,
    Load = 5,
    Accuracy = 6,
    Locked = 7,
    Io = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

/// Which signatures a count covers; passed as a plain u32.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfInf {
    Both = 0,
    Real = 1,
    Complex = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CfField {
    /// Canonical form a x³ + b x²y + c xy² + d y³.
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub disc: i64,
    pub resolvent_d: i64,
    pub conductor_f: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CfCount {
    pub count: u64,
    pub predicted: f64,
    pub predicted_err: f64,
    pub borderline: u64,
    pub unreliable: bool,
}

/// Opaque census handle.
pub struct CfCensus(Census);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CfStatus {
    match e {
        Error::Domain(_) => CfStatus::Domain,
        Error::Capacity { .. } => CfStatus::Capacity,
        Error::Integrity(_) => CfStatus::Integrity,
        Error::Load { .. } => CfStatus::Load,
        Error::Accuracy { .. } => CfStatus::Accuracy,
        Error::Locked(_) => CfStatus::Locked,
        Error::Io(_) => CfStatus::Io,
    }
}

enum Fail {
    Lib(Error),
    Status(CfStatus, String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn null() -> Fail {
    Fail::Status(CfStatus::NullPointer, "null pointer argument".into())
}

/// Runs `f`, mapping errors and panics onto a status and the thread's message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CfStatus::Ok
        }
        Ok(Err(Fail::Lib(e))) => {
            let s = status_of(&e);
            set_error(e.to_string());
            s
        }
        Ok(Err(Fail::Status(s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            CfStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(null)
}

unsafe fn census_ref<'a>(c: *const CfCensus) -> Result<&'a Census, Fail> {
    c.as_ref().map(|c| &c.0).ok_or_else(null)
}

fn inf_set(inf: u32) -> Result<InfSet, Fail> {
    match inf {
        x if x == CfInf::Both as u32 => Ok(InfSet::BOTH),
        x if x == CfInf::Real as u32 => Ok(InfSet::REAL),
        x if x == CfInf::Complex as u32 => Ok(InfSet::COMPLEX),
        x => Err(Fail::Status(CfStatus::Domain, format!("unknown signature selector {x}"))),
    }
}

fn field(r: &CubicFieldRecord) -> CfField {
    let [a, b, c, d] = r.form.coeffs();
    CfField { a, b, c, d, disc: r.disc, resolvent_d: r.resolvent_d, conductor_f: r.conductor_f }
}

/// Message of the last failed call on this thread, or NULL after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Discriminant of a x³ + b x²y + c xy² + d y³.
///
/// # Safety
/// `disc` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_form_disc(a: i64, b: i64, c: i64, d: i64, disc: *mut i64) -> CfStatus {
    guard(|| {
        let v = BinaryCubicForm::new(a, b, c, d).disc();
        *out(disc)? = i64::try_from(v).map_err(|_| Fail::Status(CfStatus::Domain, format!("discriminant {v} exceeds 64 bits")))?;
        Ok(())
    })
}

/// Disc = D·F² with D a fundamental discriminant (or 1).
///
/// # Safety
/// `d` and `f` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cf_resolvent_decompose(disc: i64, d: *mut i64, f: *mut u64) -> CfStatus {
    guard(|| {
        let (dd, ff) = invariants::resolvent_decompose(disc)?;
        *out(d)? = dd;
        *out(f)? = ff;
        Ok(())
    })
}

/// Product of the primes dividing a field discriminant; 0 for disc = 0.
#[no_mangle]
pub extern "C" fn cf_radical(disc: i64) -> u64 {
    if disc == 0 {
        return 0;
    }
    catch_unwind(|| invariants::radical_c(disc)).unwrap_or(0)
}

/// All cubic fields with 0 < |Disc| < ceiling.
///
/// # Safety
/// `census` must be a valid pointer; on success it receives a handle for `cf_census_free`.
#[no_mangle]
pub unsafe extern "C" fn cf_census_enumerate(ceiling: u64, census: *mut *mut CfCensus) -> CfStatus {
    guard(|| {
        let slot = out(census)?;
        *slot = Box::into_raw(Box::new(CfCensus(Census::enumerate(ceiling)?)));
        Ok(())
    })
}

/// Load a checksummed cache directory written by `cubicfields enumerate`.
///
/// # Safety
/// `dir` must be a NUL-terminated UTF-8 path and `census` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_census_load(dir: *const c_char, census: *mut *mut CfCensus) -> CfStatus {
    guard(|| {
        if dir.is_null() {
            return Err(null());
        }
        let dir = CStr::from_ptr(dir).to_str().map_err(|_| Fail::Status(CfStatus::Domain, "path is not UTF-8".into()))?;
        let slot = out(census)?;
        let (m, recs) = datastore::load_cache(Path::new(dir))?;
        *slot = Box::into_raw(Box::new(CfCensus(Census::from_records(recs, m.ceiling))));
        Ok(())
    })
}

/// # Safety
/// `census` must come from this library and not be used afterwards; NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn cf_census_free(census: *mut CfCensus) {
    if !census.is_null() {
        drop(Box::from_raw(census));
    }
}

/// # Safety
/// `census` must be a live handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn cf_census_len(census: *const CfCensus) -> u64 {
    census.as_ref().map_or(0, |c| c.0.records().len() as u64)
}

/// # Safety
/// `census` must be a live handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn cf_census_ceiling(census: *const CfCensus) -> u64 {
    census.as_ref().map_or(0, |c| c.0.ceiling())
}

/// Field `index` in |Disc| order.
///
/// # Safety
/// `census` must be a live handle and `field_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_census_get(census: *const CfCensus, index: u64, field_out: *mut CfField) -> CfStatus {
    guard(|| {
        let c = census_ref(census)?;
        let r = c
            .records()
            .get(index as usize)
            .ok_or_else(|| Fail::Status(CfStatus::Domain, format!("index {index} out of range (len {})", c.records().len())))?;
        *out(field_out)? = field(r);
        Ok(())
    })
}

/// Count of fields with |D|^alpha F^beta < x and its predicted main term.
///
/// # Safety
/// `census` must be a live handle and `result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_count_generalized(
    census: *const CfCensus,
    alpha: f64,
    beta: f64,
    x: f64,
    inf: u32,
    pmax: u64,
    result: *mut CfCount,
) -> CfStatus {
    guard(|| {
        let c = census_ref(census)?;
        let e = InvariantExponents::new(alpha, beta)?;
        let r = census::count_generalized(c, &SplittingConstraint::all(inf_set(inf)?), e, x, pmax)?;
        *out(result)? = CfCount {
            count: r.count,
            predicted: r.predicted_main.value,
            predicted_err: r.predicted_main.err,
            borderline: r.borderline,
            unreliable: r.unreliable,
        };
        Ok(())
    })
}

/// Coefficients 0..=zmax of the resolvent-d series with no local conditions.
/// `buf` needs room for zmax + 1 entries.
///
/// # Safety
/// `census` must be a live handle; `buf` must point to `buf_len` writable u64s.
#[no_mangle]
pub unsafe extern "C" fn cf_phi_coefficients(census: *const CfCensus, d: i64, zmax: u64, buf: *mut u64, buf_len: usize) -> CfStatus {
    guard(|| {
        let c = census_ref(census)?;
        if buf.is_null() {
            return Err(null());
        }
        if buf_len < zmax as usize + 1 {
            return Err(Fail::Status(CfStatus::BufferTooSmall, format!("need {} entries, got {buf_len}", zmax + 1)));
        }
        let series = build_phi(d, &SplittingConstraint::all(InfSet::BOTH), c)?;
        let coeffs = phi_coefficients(&series, zmax)?;
        std::slice::from_raw_parts_mut(buf, coeffs.len()).copy_from_slice(&coeffs);
        Ok(())
    })
}

/// L₁(s) = Σ_f C₁(f) f^{−s} with no local conditions.
/// With s = β/α it is the X^{1/α} constant of the generalized count when α < β.
///
/// # Safety
/// `value` and `err` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cf_l1(s: f64, inf: u32, pmax: u64, value: *mut f64, err: *mut f64) -> CfStatus {
    guard(|| {
        let v = constants::l1(&SplittingConstraint::all(inf_set(inf)?), s, pmax)?;
        *out(value)? = v.value;
        *out(err)? = v.err;
        Ok(())
    })
}

/// Constant of the X log X law for counts by radical; `real` picks the signature.
///
/// # Safety
/// `value` and `err` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cf_radical_constant(real: bool, pmax: u64, value: *mut f64, err: *mut f64) -> CfStatus {
    guard(|| {
        let sig = if real { Signature::TotallyReal } else { Signature::OneComplexPair };
        let v = constants::radical_constant(sig, pmax);
        *out(value)? = v.value;
        *out(err)? = v.err;
        Ok(())
    })
}
