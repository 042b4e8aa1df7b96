mod common;

#[test]
fn multiplication_is_associative() {
    common::prop_associativity().unwrap();
}

#[test]
fn involution_reverses_products() {
    common::prop_involution().unwrap();
}

#[test]
fn degree_is_additive() {
    common::prop_grading().unwrap();
}

#[test]
fn relative_ranges_compose_along_words() {
    common::prop_cocycle().unwrap();
}

#[test]
fn set_operations_commute_with_truncation() {
    common::prop_set_truncation().unwrap();
}

#[test]
fn smith_form_matches_determinantal_divisors() {
    common::prop_snf().unwrap();
}
