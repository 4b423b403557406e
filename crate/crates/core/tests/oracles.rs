//! Reference values computed independently of the library's own builders.

use braidchain::braid::{build_rhat, pair, sl_rhat, sl_rhat_inverse, GroupSpec, ProjLabel};
use braidchain::consistency::check_tensor_spectrum;
use braidchain::pbw::poincare_series;
use braidchain::relations::{
    classical_count, gen_chain_with, sector_ranks, ChainParams, CopyFlavor, GroupData, Sector, Sign,
};
use braidchain::{RatFunc, SparseMat};

fn r(s: &str) -> RatFunc {
    s.parse().unwrap()
}

/// `q sum e_ii x e_ii + sum_{i != j} e_ji x e_ij + (q - q^-1) sum_{i<j} e_ii x e_jj`,
/// with `(e^i_j)^h_k = delta^{ih} delta_{jk}` and rows indexed by `(h1, h2)`.
fn sl_reference(n: usize, inverse: bool) -> SparseMat {
    let mut m = SparseMat::zero(n * n);
    let (diag, tail) = if inverse {
        (r("q^-1"), r("q^-1 - q"))
    } else {
        (r("q"), r("q - q^-1"))
    };
    for i in 0..n {
        m.set(pair(n, i, i), pair(n, i, i), diag.clone());
        for j in 0..n {
            if i != j {
                // e^j_i x e^i_j: row (j, i), column (i, j).
                m.set(pair(n, j, i), pair(n, i, j), RatFunc::one());
            }
            let below = if inverse { i > j } else { i < j };
            if below {
                m.set(pair(n, i, j), pair(n, i, j), tail.clone());
            }
        }
    }
    m
}

#[test]
fn sl_braid_matrix_matches_explicit_formula() {
    for n in 2..=4 {
        assert_eq!(sl_rhat(n), sl_reference(n, false), "N={n}");
        assert_eq!(sl_rhat_inverse(n), sl_reference(n, true), "N={n}");
        assert_eq!(build_rhat(GroupSpec::sl(n)).unwrap().mat, sl_rhat(n));
    }
    // q (x2), 1 (x2), q - q^-1 (x1).
    assert_eq!(sl_rhat(2).nnz(), 5);
}

fn ranks(g: GroupSpec) -> Vec<(ProjLabel, RatFunc, usize)> {
    let d = GroupData::build(g).unwrap();
    d.braid
        .spectrum
        .iter()
        .zip(&d.projectors.projectors)
        .map(|(e, (l, p))| (*l, e.eigenvalue.clone(), p.rank()))
        .collect()
}

#[test]
fn projector_dimensions_and_eigenvalues() {
    for n in 2..=4 {
        let got = ranks(GroupSpec::sl(n));
        assert_eq!(
            got,
            vec![
                (ProjLabel::S, r("q"), n * (n + 1) / 2),
                (ProjLabel::A, r("-q^-1"), n * (n - 1) / 2)
            ]
        );
    }
    for n in 3..=5 {
        let got = ranks(GroupSpec::so(n));
        let t = RatFunc::q_pow(1 - n as i32);
        assert_eq!(
            got,
            vec![
                (ProjLabel::Sym, r("q"), n * (n + 1) / 2 - 1),
                (ProjLabel::Anti, r("-q^-1"), n * (n - 1) / 2),
                (ProjLabel::Trace, t, 1)
            ]
        );
    }
    for half in 1..=2 {
        let n = 2 * half;
        let got = ranks(GroupSpec::sp(half));
        // The symplectic eigenvalue is -q^{-1-N}: the braid equation and the
        // idempotency of the projectors both fail with -q^{1-N}.
        let t = -RatFunc::q_pow(-1 - n as i32);
        assert_eq!(
            got,
            vec![
                (ProjLabel::SymPrime, r("q"), n * (n + 1) / 2),
                (ProjLabel::AntiPrime, r("-q^-1"), n * (n - 1) / 2 - 1),
                (ProjLabel::TracePrime, t, 1)
            ]
        );
    }
}

#[test]
fn symmetric_and_antisymmetric_ranks() {
    for g in [GroupSpec::sl(3), GroupSpec::so(4), GroupSpec::sp(2)] {
        let d = GroupData::build(g).unwrap();
        assert_eq!(d.projectors.plus.rank(), g.n * (g.n + 1) / 2, "{g}");
        assert_eq!(d.projectors.minus.rank(), g.n * (g.n - 1) / 2, "{g}");
    }
}

#[test]
fn relation_counts_per_sector() {
    for n in 2..=3 {
        let d = GroupData::build(GroupSpec::sl(n)).unwrap();
        for (sign, count) in [
            (Sign::Weyl, n * (n - 1) / 2),
            (Sign::Clifford, n * (n + 1) / 2),
        ] {
            let pres = gen_chain_with(&d, &ChainParams::uniform(1, sign, 1)).unwrap();
            let ranks = sector_ranks(&pres);
            assert_eq!(ranks[&Sector::CreatorCreator], count);
            assert_eq!(ranks[&Sector::AnnihilatorAnnihilator], count);
            assert_eq!(ranks[&Sector::Mixed], n * n);
        }
    }
}

#[test]
fn admissible_cross_matrices() {
    // Weyl uses the unique negative eigenvalue -q^-1, Clifford the positive q:
    // S = -c^-1 R for the first form and S = -c R^-1 for the second.
    let d = GroupData::build(GroupSpec::sl(3)).unwrap();
    let rinv = sl_rhat_inverse(3);
    let cases = [
        (Sign::Weyl, 1, d.rhat().scale(&r("q"))),
        (Sign::Weyl, -1, rinv.scale(&r("q^-1"))),
        (Sign::Clifford, 1, d.rhat().scale(&r("-q^-1"))),
        (Sign::Clifford, -1, rinv.scale(&r("-q"))),
    ];
    for (sign, variant, expected) in cases {
        assert_eq!(
            d.cross_matrix(sign, variant).unwrap(),
            expected,
            "{sign} {variant}"
        );
    }
}

#[test]
fn classical_series_values() {
    // Polynomial ring in 4 variables, exterior algebra on 4 generators, and
    // a 12 + 6 mixed case.
    let poly: Vec<u128> = (0..5).map(|d| classical_count(4, 0, d)).collect();
    assert_eq!(poly, [1, 4, 10, 20, 35]);
    let ext: Vec<u128> = (0..6).map(|d| classical_count(0, 4, d)).collect();
    assert_eq!(ext, [1, 4, 6, 4, 1, 0]);
    let mixed: Vec<u128> = (0..5).map(|d| classical_count(12, 6, d)).collect();
    assert_eq!(mixed, [1, 18, 165, 1032, 4974]);
}

#[test]
fn mixed_three_copy_chain_series() {
    let d = GroupData::build(GroupSpec::sl(3)).unwrap();
    let params = ChainParams::from_flavors(vec![
        CopyFlavor::new(Sign::Weyl, 1),
        CopyFlavor::new(Sign::Clifford, -1),
        CopyFlavor::new(Sign::Weyl, -1),
    ]);
    let pres = gen_chain_with(&d, &params).unwrap();
    let s = poincare_series(&pres, 4).unwrap();
    let counts: Vec<u128> = s.rows.iter().map(|r| r.deformed).collect();
    assert_eq!(counts, [1, 18, 165, 1032, 4974]);
}

#[test]
fn so3_tensor_spectrum() {
    let d = GroupData::build(GroupSpec::so(3)).unwrap();
    let t = check_tensor_spectrum(&d, 2, 1).unwrap();
    let got: Vec<(String, usize)> = t
        .eigenvalues
        .iter()
        .map(|l| (l.eigenvalue.to_string(), l.multiplicity))
        .collect();
    // Products of {q (3), -q^-1 (1)} with {q (5), -q^-1 (3), q^-2 (1)}:
    // q^2: 15, -1: 9 + 5, q^-1: 3, q^-2: 3, -q^-3: 1.
    let total: usize = got.iter().map(|(_, m)| m).sum();
    assert_eq!(total, 36);
    assert_eq!(
        got,
        [
            ("q^2".to_string(), 15),
            ("-1".to_string(), 14),
            ("q^-1".to_string(), 3),
            ("q^-2".to_string(), 3),
            ("-q^-3".to_string(), 1)
        ]
    );
    assert_eq!((t.positives, t.negatives), (3, 2));
}
