mod common;

#[test]
fn disc_is_gl2_invariant() {
    common::prop_disc_invariance().unwrap();
}

#[test]
fn reduction_is_idempotent_and_canonical() {
    common::prop_reduction().unwrap();
}

#[test]
fn resolvent_coefficients_are_nonnegative_and_close_up() {
    common::prop_phi_coefficients().unwrap();
}

#[test]
fn index_excess_is_even() {
    common::prop_index_parity().unwrap();
}

#[test]
fn cache_round_trip_is_byte_identical() {
    common::prop_cache_roundtrip().unwrap();
}
