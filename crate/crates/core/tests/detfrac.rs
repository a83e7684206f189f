use cantorflip::detfrac::{dim_fm, graph_words, growth_rate, level_of, rho, sft_words, tree_word_counts, tree_words};
use cantorflip::DeterministicSpec;

#[test]
fn generators_agree() {
    for m in 3..=14u64 {
        let spec = DeterministicSpec::new(m).unwrap();
        let l = level_of(m).unwrap();
        for n in 0..=12 {
            let tree = tree_words(&spec, n).unwrap();
            assert_eq!(tree, graph_words(m, n).unwrap(), "m = {m}, n = {n}");
            assert!(tree.is_subset(&sft_words(l, n).unwrap()), "m = {m}, n = {n}");
        }
    }
}

#[test]
fn growth_matches_dimension() {
    let r = 1.0 / 3.0;
    for (m, range) in [(3u64, 20..=28), (7, 24..=32), (15, 32..=40), (30, 32..=40)] {
        let counts = tree_word_counts(&DeterministicSpec::new(m).unwrap(), range).unwrap();
        let g = growth_rate(&counts).unwrap();
        let dim = dim_fm(m, r).unwrap();
        let est = g.regression_ratio.ln() / -r.ln();
        assert!((est / dim - 1.0).abs() < 0.01, "m = {m}: {est} vs {dim}");
    }
}

#[test]
fn tree_words_fill_the_subshift() {
    for m in 3..=14u64 {
        let spec = DeterministicSpec::new(m).unwrap();
        let l = level_of(m).unwrap();
        for n in 0..=16 {
            assert_eq!(
                tree_words(&spec, n).unwrap(),
                sft_words(l, n).unwrap(),
                "m = {m}, n = {n}"
            );
        }
    }
}

#[test]
fn tree_growth_for_m7() {
    let counts = tree_word_counts(&DeterministicSpec::new(7).unwrap(), 15..=22).unwrap();
    let g = growth_rate(&counts).unwrap();
    assert!((g.last_ratio / rho(2).unwrap() - 1.0).abs() < 0.01, "{g:?}");
}

#[test]
fn dimension_constant_on_blocks() {
    let r = 1.0 / 3.0;
    let mut m = 3u64;
    while m <= 62 {
        let l = level_of(m).unwrap();
        let first = (1u64 << (l + 1)) - 1;
        assert!(m >= first && m <= (1u64 << (l + 2)) - 2);
        assert_eq!(dim_fm(m, r).unwrap(), dim_fm(first, r).unwrap());
        m += 1;
    }
}
