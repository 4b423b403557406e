//! Standalone verifications: admissibility of a (group, sign) pair, braiding
//! uniqueness, the `GL_q(M) x SL_q(N)` decompositions, the tensor-product
//! spectrum obstruction for SO/Sp, and star structures on presentations.

use std::cmp::Ordering;

use serde::Serialize;

use crate::braid::{
    check_braid, glm_rhat, sl_projectors, sl_rhat, sl_rhat_inverse, Family, GroupSpec, Metric,
};
use crate::error::{Error, Result};
use crate::relations::{
    glm_projectors, AlgebraPresentation, GenId, GroupData, Kind, Relation, Sector, Sign, Source,
};
use crate::scalar::RatFunc;
use crate::tensor::SparseMat;

/// Expected admissibility: SL both signs, SO Weyl only, Sp Clifford only.
/// `Sp_q(1)` on `N = 2` is the exception: its `a'` eigenspace is empty, so it
/// has a single negative eigenvalue and admits Weyl relations too.
pub fn expected_admissible(group: GroupSpec, sign: Sign) -> bool {
    match group.family {
        Family::SL => true,
        Family::SO => sign == Sign::Weyl,
        Family::Sp => sign == Sign::Clifford || group.n == 2,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityVerdict {
    pub group: GroupSpec,
    pub sign: Sign,
    pub admissible: bool,
    pub eigenvalues_of_required_sign: Vec<RatFunc>,
    /// The forced cross-relation matrix `S`, rendered as a dump.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forced_s: Option<String>,
    /// For each candidate eigenvalue `c`, the number of nonzero entries of
    /// `(1 - c^-1 R) P`, which must vanish for a consistent algebra.
    pub witness_nnz: Vec<usize>,
}

/// The single-copy ansatz `A A+ = 1 + S A+A` with `S = b R` is consistent
/// with the creator relations iff `(1 + S) P = 0`, `P` the creator
/// relation projector; this forces a unique eigenvalue of the required sign.
pub fn check_lemma1(data: &GroupData, sign: Sign) -> Result<AdmissibilityVerdict> {
    let eig = data.eigenvalues_of_required_sign(sign);
    let p = data.relation_projector(sign);
    let n2 = p.dim();
    let mut witness_nnz = Vec::new();
    for c in &eig {
        let s = data.rhat().scale(&-c.inv()?);
        let w = SparseMat::identity(n2).matadd(&s)?.matmul(p)?;
        witness_nnz.push(w.nnz());
    }
    let admissible = eig.len() == 1;
    let forced_s = if admissible {
        Some(data.cross_matrix(sign, 1)?.dump())
    } else {
        None
    };
    Ok(AdmissibilityVerdict {
        group: data.group(),
        sign,
        admissible,
        eigenvalues_of_required_sign: eig,
        forced_s,
        witness_nnz,
    })
}

/// `R_12 V_23 R_12 = R_23 V_12 R_23` on three legs.
pub fn check_prop1(v: &SparseMat, r: &SparseMat) -> Result<bool> {
    if v.dim() != r.dim() {
        return Err(Error::Dimension(format!(
            "V has dimension {} but R has {}",
            v.dim(),
            r.dim()
        )));
    }
    let n = leg_dim(r.dim())?;
    let lift = |m: &SparseMat, pos| -> Result<SparseMat> {
        let id = SparseMat::identity(n);
        Ok(match pos {
            1 => m.kron(&id),
            _ => id.kron(m),
        })
    };
    let (r12, r23, v12, v23) = (lift(r, 1)?, lift(r, 2)?, lift(v, 1)?, lift(v, 2)?);
    let lhs = r12.matmul(&v23)?.matmul(&r12)?;
    let rhs = r23.matmul(&v12)?.matmul(&r23)?;
    Ok(lhs == rhs)
}

fn leg_dim(d: usize) -> Result<usize> {
    let n = (d as f64).sqrt().round() as usize;
    if n * n != d {
        return Err(Error::Dimension(format!("{d} is not a square")));
    }
    Ok(n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecoReport {
    pub m: usize,
    pub n: usize,
    pub projector_axioms: bool,
    pub rplus_decomposition: bool,
    pub rminus_decomposition: bool,
    pub expansion_identity: bool,
    pub braid_equation: bool,
    pub rank_minus: usize,
    pub rank_plus: usize,
}

impl DecoReport {
    pub fn holds(&self) -> bool {
        self.projector_axioms
            && self.rplus_decomposition
            && self.rminus_decomposition
            && self.expansion_identity
            && self.braid_equation
    }
}

/// Decompositions of `R_+ = R_M (x) R` and `R_- = R_M^-1 (x) R` into tensor
/// products of `SL` projectors, and the expansion of `(q + q^-1)^2 P^-`.
pub fn check_deco_identities(m: usize, n: usize) -> Result<DecoReport> {
    if m < 2 || n < 2 {
        return Err(Error::Config("M and N must be at least 2".into()));
    }
    let (sm, am) = sl_projectors(m);
    let (s, a) = sl_projectors(n);
    let (rm, r) = (sl_rhat(m), sl_rhat(n));
    let s1 = sm.kron(&s);
    let s2 = am.kron(&a);
    let a1 = am.kron(&s);
    let a2 = sm.kron(&a);
    let minus = a2.matadd(&a1)?;
    let plus = s2.matadd(&s1)?;
    let dim = minus.dim();
    let id = SparseMat::identity(dim);

    let parts = [&s1, &s2, &a1, &a2];
    let mut axioms = plus.matadd(&minus)? == id;
    for (i, x) in parts.iter().enumerate() {
        for (j, y) in parts.iter().enumerate() {
            let prod = x.matmul(y)?;
            axioms &= if i == j { prod == **x } else { prod.is_zero() };
        }
    }

    let q2 = RatFunc::q_pow(2);
    let qm2 = RatFunc::q_pow(-2);
    let rplus = rm.kron(&r);
    let rminus = sl_rhat_inverse(m).kron(&r);
    let rplus_expected = minus
        .scale(&RatFunc::int(-1))
        .matadd(&s1.scale(&q2))?
        .matadd(&s2.scale(&qm2))?;
    let rminus_expected = plus.matsub(&a1.scale(&q2))?.matsub(&a2.scale(&qm2))?;

    let lhs = minus.scale(&RatFunc::q_plus_qinv().pow(2)?);
    let rhs = id.matsub(&rplus)?.scale(&RatFunc::int(2)).matadd(
        &SparseMat::identity(m * m)
            .kron(&r)
            .matadd(&rm.kron(&SparseMat::identity(n * n)))?
            .scale(&RatFunc::q_minus_qinv()),
    )?;

    let mn = m * n;
    let braid_equation =
        check_braid(&glm_rhat(m, n, 1), mn) && check_braid(&glm_rhat(m, n, -1), mn);
    let (gm, gp) = glm_projectors(m, n);
    Ok(DecoReport {
        m,
        n,
        projector_axioms: axioms,
        rplus_decomposition: rplus == rplus_expected,
        rminus_decomposition: rminus == rminus_expected,
        expansion_identity: lhs == rhs,
        braid_equation,
        rank_minus: gm.rank(),
        rank_plus: gp.rank(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumLine {
    pub eigenvalue: RatFunc,
    pub multiplicity: usize,
    pub positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorSpectrum {
    pub group: GroupSpec,
    pub m: usize,
    pub variant: i8,
    pub eigenvalues: Vec<SpectrumLine>,
    pub positives: usize,
    pub negatives: usize,
    /// `K = sum lambda Pi_lambda` and `rank Pi_lambda` equal to the summed
    /// factor ranks, checked exactly.
    pub verified: bool,
}

impl TensorSpectrum {
    /// More than one eigenvalue of each sign: neither Weyl nor Clifford
    /// relations can be built on `R_M^variant (x) R`.
    pub fn excludes_both_signs(&self) -> bool {
        self.positives >= 2 && self.negatives >= 2
    }
}

/// Spectrum of `R_M^variant (x) R` from products of factor spectra.
pub fn check_tensor_spectrum(data: &GroupData, m: usize, variant: i8) -> Result<TensorSpectrum> {
    if m == 0 {
        return Err(Error::Config("M must be at least 1".into()));
    }
    let rm = if variant >= 0 {
        sl_rhat(m)
    } else {
        sl_rhat_inverse(m)
    };
    let (sm, am) = sl_projectors(m);
    let (cs, ca) = if variant >= 0 {
        (RatFunc::q(), -RatFunc::q_pow(-1))
    } else {
        (RatFunc::q_pow(-1), -RatFunc::q())
    };
    let mut factors_m = vec![(cs, sm)];
    if m >= 2 {
        factors_m.push((ca, am));
    }
    // Combine equal products into one projector each.
    let mut lines: Vec<(RatFunc, SparseMat)> = Vec::new();
    for (lm, pm) in &factors_m {
        for (lg, (_, pg)) in data.braid.spectrum.iter().zip(&data.projectors.projectors) {
            if lg.expected_rank == 0 {
                continue;
            }
            let lambda = lm * &lg.eigenvalue;
            let proj = pm.kron(pg);
            if proj.is_zero() {
                continue;
            }
            match lines.iter_mut().find(|(l, _)| *l == lambda) {
                Some((_, p)) => *p = p.matadd(&proj)?,
                None => lines.push((lambda, proj)),
            }
        }
    }
    let k = rm.kron(data.rhat());
    let mut sum = SparseMat::zero(k.dim());
    let mut eigenvalues = Vec::new();
    for (l, p) in &lines {
        sum = sum.matadd(&p.scale(l))?;
        eigenvalues.push(SpectrumLine {
            eigenvalue: l.clone(),
            multiplicity: p.rank(),
            positive: l.sign_near_one() == Ordering::Greater,
        });
    }
    let total: usize = eigenvalues.iter().map(|e| e.multiplicity).sum();
    let verified = sum == k && total == k.dim();
    eigenvalues.sort_by(|a, b| {
        b.multiplicity
            .cmp(&a.multiplicity)
            .then_with(|| a.eigenvalue.to_string().cmp(&b.eigenvalue.to_string()))
    });
    let positives = eigenvalues.iter().filter(|e| e.positive).count();
    Ok(TensorSpectrum {
        group: data.group(),
        m,
        variant,
        negatives: eigenvalues.len() - positives,
        positives,
        eigenvalues,
        verified,
    })
}

/// Conjugation rule of a star structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StarRule {
    /// `A^{alpha,i} -> A+_{pi(alpha),i}` on all generators.
    Plain,
    /// `A+_{alpha,i} -> A+_{pi(alpha),j} T^{ji}` on creators only.
    Metric(Vec<Vec<RatFunc>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarSpec {
    /// `perm[alpha - 1] = pi(alpha)`, 1-based.
    pub perm: Vec<usize>,
    pub rule: StarRule,
}

impl StarSpec {
    pub fn plain(perm: Vec<usize>) -> Result<Self> {
        validate_perm(&perm)?;
        Ok(StarSpec {
            perm,
            rule: StarRule::Plain,
        })
    }

    pub fn metric(perm: Vec<usize>, twist: Vec<Vec<RatFunc>>) -> Result<Self> {
        validate_perm(&perm)?;
        Ok(StarSpec {
            perm,
            rule: StarRule::Metric(twist),
        })
    }
}

/// `pi(alpha) = M + 1 - alpha`.
pub fn inverse_ordering(m: usize) -> Vec<usize> {
    (1..=m).rev().collect()
}

pub fn identity_perm(m: usize) -> Vec<usize> {
    (1..=m).collect()
}

fn validate_perm(perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p == 0 || p > perm.len() || seen[p - 1] {
            return Err(Error::Config(format!("{perm:?} is not a permutation")));
        }
        seen[p - 1] = true;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarReport {
    pub preserved: bool,
    pub images_checked: usize,
    /// Tags and renderings of relations whose image leaves the span.
    pub witnesses: Vec<String>,
}

const MAX_WITNESSES: usize = 3;

/// Image of a relation under an antilinear antihomomorphism given on
/// generators; real `q`, so coefficients are unchanged.
fn star_image(r: &Relation, image: &dyn Fn(GenId) -> Vec<(GenId, RatFunc)>) -> Relation {
    let mut out = Relation::new(r.tag.clone());
    for (&(x, y), c) in &r.terms {
        for (yy, cy) in image(y) {
            for (xx, cx) in image(x) {
                out.add(yy, xx, &(c * &(&cy * &cx)));
            }
        }
    }
    out.constant = r.constant.clone();
    out
}

fn render_relation(pres: &AlgebraPresentation, r: &Relation) -> String {
    let mut p = pres.clone();
    p.relations = vec![r.clone()];
    p.dump().trim_end().to_string()
}

/// Image of one generator as a linear combination of generators.
type GeneratorImage<'a> = dyn Fn(GenId) -> Vec<(GenId, RatFunc)> + 'a;

/// Whether the relation span is mapped into itself. For the metric rule only
/// the creator sector is checked.
pub fn check_star(pres: &AlgebraPresentation, spec: &StarSpec) -> Result<StarReport> {
    if spec.perm.len() != pres.copies {
        return Err(Error::Config(format!(
            "permutation of {} copies for a presentation with {}",
            spec.perm.len(),
            pres.copies
        )));
    }
    let mut inv = vec![0usize; spec.perm.len()];
    for (a, &p) in spec.perm.iter().enumerate() {
        inv[p - 1] = a + 1;
    }
    let (sector, image): (Option<Sector>, Box<GeneratorImage>) = match &spec.rule {
        StarRule::Plain => (
            None,
            Box::new(|g| {
                let s = pres.symbol(g);
                let t = match s.kind {
                    Kind::Annihilator => pres.cre(spec.perm[s.copy - 1], s.mode),
                    Kind::Creator => pres.ann(inv[s.copy - 1], s.mode),
                };
                vec![(t, RatFunc::one())]
            }),
        ),
        StarRule::Metric(twist) => {
            if twist.len() != pres.modes {
                return Err(Error::Dimension(
                    "metric size differs from mode count".into(),
                ));
            }
            (
                Some(Sector::CreatorCreator),
                Box::new(move |g| {
                    let s = pres.symbol(g);
                    let target = spec.perm[s.copy - 1];
                    (1..=pres.modes)
                        .filter_map(|j| {
                            let c = twist[j - 1][s.mode - 1].clone();
                            (!c.is_zero()).then(|| (pres.cre(target, j), c))
                        })
                        .collect()
                }),
            )
        }
    };
    let relations: Vec<&Relation> = pres
        .relations
        .iter()
        .filter(|r| sector.is_none_or(|s| pres.sector_of(r) == s))
        .collect();
    let span = match sector {
        Some(s) => pres.sector_span(s),
        None => pres.span(),
    };
    let mut witnesses = Vec::new();
    let mut preserved = true;
    for r in &relations {
        let img = star_image(r, &*image);
        if !span.contains(&img.to_vec()) {
            preserved = false;
            if witnesses.len() < MAX_WITNESSES {
                witnesses.push(render_relation(pres, r));
            }
        }
    }
    Ok(StarReport {
        preserved,
        images_checked: relations.len(),
        witnesses,
    })
}

/// Creator-sector check of the metric star on an SO chain of Weyl copies.
pub fn check_metric_star(
    pres: &AlgebraPresentation,
    metric: &Metric,
    perm: Vec<usize>,
) -> Result<StarReport> {
    match &pres.source {
        Source::Chain { group, params }
            if group.family == Family::SO
                && params.flavors.iter().all(|f| f.sign == Sign::Weyl) => {}
        _ => {
            return Err(Error::Config(
                "the metric star is defined for SO chains of Weyl copies".into(),
            ))
        }
    }
    check_star(pres, &StarSpec::metric(perm, metric.star_matrix())?)
}

/// `R` with one entry shifted by `by`.
pub fn perturb(r: &SparseMat, row: usize, col: usize, by: &RatFunc) -> SparseMat {
    let mut p = r.clone();
    p.add_at(row, col, by);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::extract_metric;
    use crate::relations::{gen_chain, gen_glm, gen_single_copy, ChainParams, CopyFlavor};

    #[test]
    fn lemma1_table() {
        for g in [
            GroupSpec::sl(2),
            GroupSpec::sl(3),
            GroupSpec::so(3),
            GroupSpec::so(4),
            GroupSpec::so(5),
            GroupSpec::sp(1),
            GroupSpec::sp(2),
            GroupSpec::sp(3),
        ] {
            let data = GroupData::build(g).unwrap();
            for sign in [Sign::Weyl, Sign::Clifford] {
                let v = check_lemma1(&data, sign).unwrap();
                assert_eq!(v.admissible, expected_admissible(g, sign), "{g} {sign}");
                if v.admissible {
                    assert_eq!(v.witness_nnz, vec![0]);
                } else {
                    assert!(v.eigenvalues_of_required_sign.len() >= 2);
                    assert!(v.witness_nnz.iter().all(|&k| k > 0));
                }
            }
        }
    }

    #[test]
    fn lemma1_examples() {
        let d = GroupData::build(GroupSpec::sl(2)).unwrap();
        let v = check_lemma1(&d, Sign::Weyl).unwrap();
        assert_eq!(v.eigenvalues_of_required_sign, vec![-RatFunc::q_pow(-1)]);
        let d = GroupData::build(GroupSpec::so(3)).unwrap();
        let v = check_lemma1(&d, Sign::Clifford).unwrap();
        assert_eq!(
            v.eigenvalues_of_required_sign,
            vec![RatFunc::q(), RatFunc::q_pow(-2)]
        );
        let d = GroupData::build(GroupSpec::sp(2)).unwrap();
        let v = check_lemma1(&d, Sign::Clifford).unwrap();
        assert_eq!(v.eigenvalues_of_required_sign, vec![RatFunc::q()]);
    }

    #[test]
    fn prop1() {
        for n in [2, 3] {
            let r = sl_rhat(n);
            let x: RatFunc = "(q^2 + 3)/(q - 2)".parse().unwrap();
            assert!(check_prop1(&r, &r).unwrap());
            assert!(check_prop1(&r.scale(&x), &r).unwrap());
            assert!(!check_prop1(&sl_rhat_inverse(n), &r).unwrap());
            assert!(!check_prop1(&SparseMat::identity(n * n), &r).unwrap());
            assert!(!check_prop1(&perturb(&r, 1, 2, &RatFunc::q()), &r).unwrap());
        }
    }

    #[test]
    fn deco() {
        for (m, n) in [(2, 2), (2, 3)] {
            let d = check_deco_identities(m, n).unwrap();
            assert!(d.holds(), "{d:?}");
        }
        let d = check_deco_identities(2, 2).unwrap();
        assert_eq!((d.rank_minus, d.rank_plus), (6, 10));
    }

    #[test]
    fn tensor_spectrum_so3() {
        let data = GroupData::build(GroupSpec::so(3)).unwrap();
        let t = check_tensor_spectrum(&data, 2, 1).unwrap();
        assert!(t.verified);
        let mut eig: Vec<String> = t
            .eigenvalues
            .iter()
            .map(|e| e.eigenvalue.to_string())
            .collect();
        eig.sort();
        assert_eq!(eig, ["-1", "-q^-3", "q^-1", "q^-2", "q^2"]);
        assert_eq!((t.positives, t.negatives), (3, 2));
        assert!(t.excludes_both_signs());
    }

    #[test]
    fn sl_tensor_spectrum_is_admissible() {
        let data = GroupData::build(GroupSpec::sl(2)).unwrap();
        let t = check_tensor_spectrum(&data, 2, 1).unwrap();
        assert!(t.verified);
        let mult: Vec<(String, usize)> = t
            .eigenvalues
            .iter()
            .map(|e| (e.eigenvalue.to_string(), e.multiplicity))
            .collect();
        assert_eq!(
            mult,
            [
                ("q^2".to_string(), 9),
                ("-1".to_string(), 6),
                ("q^-2".to_string(), 1)
            ]
        );
        assert_eq!(t.negatives, 1);
    }

    #[test]
    fn plain_star_on_chains() {
        let pres = gen_chain(GroupSpec::sl(2), &ChainParams::uniform(2, Sign::Weyl, 1)).unwrap();
        assert!(
            check_star(&pres, &StarSpec::plain(inverse_ordering(2)).unwrap())
                .unwrap()
                .preserved
        );
        let rep = check_star(&pres, &StarSpec::plain(identity_perm(2)).unwrap()).unwrap();
        assert!(!rep.preserved);
        assert!(!rep.witnesses.is_empty());
        let single = gen_single_copy(GroupSpec::sl(3), Sign::Clifford, -1).unwrap();
        assert!(
            check_star(&single, &StarSpec::plain(vec![1]).unwrap())
                .unwrap()
                .preserved
        );
    }

    #[test]
    fn star_conditions() {
        let g = GroupSpec::sl(2);
        let pi = StarSpec::plain(inverse_ordering(3)).unwrap();
        let sym = ChainParams::uniform(3, Sign::Weyl, 1).with_generic_couplings();
        assert!(
            check_star(&gen_chain(g, &sym).unwrap(), &pi)
                .unwrap()
                .preserved
        );
        let mut asym = sym.clone();
        asym.couplings.insert((1, 2), RatFunc::q_pow(2));
        assert!(
            !check_star(&gen_chain(g, &asym).unwrap(), &pi)
                .unwrap()
                .preserved
        );
        let mixed_eps = ChainParams::from_flavors(vec![
            CopyFlavor::new(Sign::Weyl, 1),
            CopyFlavor::new(Sign::Clifford, 1),
        ]);
        let pi2 = StarSpec::plain(inverse_ordering(2)).unwrap();
        assert!(
            !check_star(&gen_chain(g, &mixed_eps).unwrap(), &pi2)
                .unwrap()
                .preserved
        );
        let mixed_eta = ChainParams::from_flavors(vec![
            CopyFlavor::new(Sign::Weyl, 1),
            CopyFlavor::new(Sign::Weyl, -1),
        ]);
        assert!(
            !check_star(&gen_chain(g, &mixed_eta).unwrap(), &pi2)
                .unwrap()
                .preserved
        );
    }

    #[test]
    fn glm_star() {
        for sign in [Sign::Weyl, Sign::Clifford] {
            let pres = gen_glm(2, 2, sign, false).unwrap();
            assert!(
                check_star(&pres, &StarSpec::plain(identity_perm(2)).unwrap())
                    .unwrap()
                    .preserved
            );
        }
    }

    #[test]
    fn metric_star() {
        let data = GroupData::build(GroupSpec::so(3)).unwrap();
        let metric = extract_metric(&data.projectors, 3).unwrap();
        for m in [1, 2] {
            let pres =
                gen_chain(GroupSpec::so(3), &ChainParams::uniform(m, Sign::Weyl, 1)).unwrap();
            let rep = check_metric_star(&pres, &metric, inverse_ordering(m)).unwrap();
            assert!(rep.preserved, "{rep:?}");
        }
        let pres = gen_chain(GroupSpec::so(3), &ChainParams::uniform(2, Sign::Weyl, 1)).unwrap();
        assert!(
            !check_metric_star(&pres, &metric, identity_perm(2))
                .unwrap()
                .preserved
        );
        // odd N: the raw factor of P^t is off by q^(1/2) in the middle entry
        let raw = StarSpec::metric(vec![1], metric.upper.clone()).unwrap();
        let single = gen_chain(GroupSpec::so(3), &ChainParams::uniform(1, Sign::Weyl, 1)).unwrap();
        assert!(!check_star(&single, &raw).unwrap().preserved);
    }

    #[test]
    fn metric_star_even_n_accepts_raw_metric() {
        let data = GroupData::build(GroupSpec::so(4)).unwrap();
        let metric = extract_metric(&data.projectors, 4).unwrap();
        let pres = gen_chain(GroupSpec::so(4), &ChainParams::uniform(2, Sign::Weyl, 1)).unwrap();
        let raw = StarSpec::metric(inverse_ordering(2), metric.upper.clone()).unwrap();
        assert!(check_star(&pres, &raw).unwrap().preserved);
        assert!(
            check_metric_star(&pres, &metric, inverse_ordering(2))
                .unwrap()
                .preserved
        );
    }
}
