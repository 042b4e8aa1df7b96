mod common;

#[test]
fn en_agrees_with_brute_force_on_truncations() {
    for n in 1..=3 {
        for m in 2..=6 {
            let count = common::cross_validate(n, m).unwrap_or_else(|e| panic!("n = {n}, N = {m}: {e}"));
            assert!(count > 0);
        }
    }
}
