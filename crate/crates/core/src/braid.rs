//! Braid matrices of `SL_q(N)`, `SO_q(N)` and `Sp_q(n)` in the defining
//! representation, their spectral projectors and the `SO_q(N)` metric.
//!
//! The `SL` matrix is built from its closed form. The `SO`/`Sp` matrices are
//! the FRT B/C/D-series matrices, treated as candidates: construction only
//! succeeds if the candidate satisfies the braid equation and is annihilated
//! by the declared spectrum, and [`spectral_projectors`] further checks the
//! declared projector ranks.
//!
//! For odd `N` the FRT `SO` matrix has half-integer powers of `q` in the
//! entries that couple the middle basis vector. We use the equivalent matrix
//! conjugated by `D (x) D`, `D = diag(1, .., q^(1/4), .., 1)`, which has the
//! same spectrum and projector ranks and lies in `Z[q, q^-1]`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::RatFunc;
use crate::tensor::{LegIndex, SparseMat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    SL,
    SO,
    Sp,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::SL => "sl",
            Family::SO => "so",
            Family::Sp => "sp",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sl" => Ok(Family::SL),
            "so" => Ok(Family::SO),
            "sp" => Ok(Family::Sp),
            _ => Err(Error::InvalidGroup(format!("unknown family '{s}'"))),
        }
    }
}

/// A quantum group together with the dimension `N` of its defining
/// representation (`N = 2n` for `Sp_q(n)`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: Family,
    pub n: usize,
}

impl GroupSpec {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGroup(format!(
                "{family}: N must be at least 2"
            )));
        }
        if family == Family::Sp && !n.is_multiple_of(2) {
            return Err(Error::InvalidGroup("Sp requires even N".into()));
        }
        Ok(GroupSpec { family, n })
    }

    pub fn sl(n: usize) -> Self {
        GroupSpec::new(Family::SL, n).expect("valid SL group")
    }

    pub fn so(n: usize) -> Self {
        GroupSpec::new(Family::SO, n).expect("valid SO group")
    }

    /// `Sp_q(n)`, acting on `N = 2n`.
    pub fn sp(n: usize) -> Self {
        GroupSpec::new(Family::Sp, 2 * n).expect("valid Sp group")
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.n)
    }
}

/// Projector labels: `S, A` for `SL`; `s, a, t` for `SO`; `s', a', t'` for `Sp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProjLabel {
    S,
    A,
    #[serde(rename = "s")]
    Sym,
    #[serde(rename = "a")]
    Anti,
    #[serde(rename = "t")]
    Trace,
    #[serde(rename = "s'")]
    SymPrime,
    #[serde(rename = "a'")]
    AntiPrime,
    #[serde(rename = "t'")]
    TracePrime,
}

impl fmt::Display for ProjLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProjLabel::S => "S",
            ProjLabel::A => "A",
            ProjLabel::Sym => "s",
            ProjLabel::Anti => "a",
            ProjLabel::Trace => "t",
            ProjLabel::SymPrime => "s'",
            ProjLabel::AntiPrime => "a'",
            ProjLabel::TracePrime => "t'",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub label: ProjLabel,
    pub eigenvalue: RatFunc,
    pub expected_rank: usize,
}

#[derive(Clone, Debug)]
pub struct BraidMatrix {
    pub group: GroupSpec,
    pub mat: SparseMat,
    pub spectrum: Vec<SpectrumEntry>,
}

/// Declared projector decomposition of `R = sum_mu c_mu P^mu`.
pub fn declared_spectrum(group: GroupSpec) -> Vec<SpectrumEntry> {
    let n = group.n;
    let sym = n * (n + 1) / 2;
    let anti = n * (n - 1) / 2;
    let e = |label, eigenvalue, expected_rank| SpectrumEntry {
        label,
        eigenvalue,
        expected_rank,
    };
    let minus_qinv = -RatFunc::q_pow(-1);
    match group.family {
        Family::SL => vec![
            e(ProjLabel::S, RatFunc::q(), sym),
            e(ProjLabel::A, minus_qinv, anti),
        ],
        Family::SO => vec![
            e(ProjLabel::Sym, RatFunc::q(), sym - 1),
            e(ProjLabel::Anti, minus_qinv, anti),
            e(ProjLabel::Trace, RatFunc::q_pow(1 - n as i32), 1),
        ],
        Family::Sp => vec![
            e(ProjLabel::SymPrime, RatFunc::q(), sym),
            e(ProjLabel::AntiPrime, minus_qinv, anti - 1),
            e(ProjLabel::TracePrime, -RatFunc::q_pow(-1 - n as i32), 1),
        ],
    }
}

/// Index of the basis pair `(i, j)` in `V (x) V`.
#[inline]
pub fn pair(n: usize, i: usize, j: usize) -> usize {
    i * n + j
}

/// Closed form of the `SL_q(N)` braid matrix:
/// `q` on `(ii, ii)`, `1` on `(ji, ij)` for `i != j`, `q - q^-1` on `(ij, ij)`
/// for `i < j`.
pub fn sl_rhat(n: usize) -> SparseMat {
    let mut m = SparseMat::zero(n * n);
    for i in 0..n {
        m.set(pair(n, i, i), pair(n, i, i), RatFunc::q());
        for j in 0..n {
            if i != j {
                m.set(pair(n, j, i), pair(n, i, j), RatFunc::one());
            }
            if i < j {
                m.set(pair(n, i, j), pair(n, i, j), RatFunc::q_minus_qinv());
            }
        }
    }
    m
}

/// Closed form of the inverse `SL_q(N)` braid matrix.
pub fn sl_rhat_inverse(n: usize) -> SparseMat {
    let mut m = SparseMat::zero(n * n);
    for i in 0..n {
        m.set(pair(n, i, i), pair(n, i, i), RatFunc::q_pow(-1));
        for j in 0..n {
            if i != j {
                m.set(pair(n, j, i), pair(n, i, j), RatFunc::one());
            }
            if i > j {
                m.set(pair(n, i, j), pair(n, i, j), -RatFunc::q_minus_qinv());
            }
        }
    }
    m
}

/// FRT B/C/D-series candidate, gauged into `Z[q, q^-1]` for odd `N`.
fn frt_rhat(group: GroupSpec) -> SparseMat {
    let n = group.n;
    let prime = |i: usize| n - 1 - i;
    // twice rho, 1-based position k = i + 1
    let two_rho = |i: usize| -> i32 {
        let k = (i + 1) as i32;
        let nn = n as i32;
        match group.family {
            Family::SO => {
                if 2 * k < nn + 1 {
                    nn - 2 * k
                } else if 2 * k == nn + 1 {
                    1 // gauged middle index
                } else {
                    nn + 2 - 2 * k
                }
            }
            Family::Sp => {
                let h = nn / 2;
                if k <= h {
                    2 * (h + 1 - k)
                } else {
                    2 * (h - k)
                }
            }
            Family::SL => unreachable!(),
        }
    };
    let eps = |i: usize| -> i64 {
        if group.family == Family::Sp && i >= n / 2 {
            -1
        } else {
            1
        }
    };
    // R (not yet permuted); R[(i,k),(j,l)] is the coefficient of e_ij (x) e_kl
    let mut r = SparseMat::zero(n * n);
    for i in 0..n {
        for j in 0..n {
            let v = if i == j {
                if i == prime(i) {
                    RatFunc::one()
                } else {
                    RatFunc::q()
                }
            } else if j == prime(i) {
                RatFunc::q_pow(-1)
            } else {
                RatFunc::one()
            };
            r.add_at(pair(n, i, j), pair(n, i, j), &v);
        }
    }
    let h = RatFunc::q_minus_qinv();
    for i in 0..n {
        for j in 0..i {
            r.add_at(pair(n, i, j), pair(n, j, i), &h);
            let exp = (two_rho(i) - two_rho(j)) / 2;
            let c = &(&h * &RatFunc::q_pow(exp)) * &RatFunc::int(-eps(i) * eps(j));
            r.add_at(pair(n, i, prime(i)), pair(n, j, prime(j)), &c);
        }
    }
    // R-hat = P R: row (a, b) of R-hat is row (b, a) of R
    let mut out = SparseMat::zero(n * n);
    for (row, col, v) in r.entries() {
        let (a, b) = (row / n, row % n);
        out.set(pair(n, b, a), col, v.clone());
    }
    out
}

/// `R_12 R_23 R_12 == R_23 R_12 R_23` on three legs.
pub fn check_braid(r: &SparseMat, leg_dim: usize) -> bool {
    if r.dim() != leg_dim * leg_dim {
        return false;
    }
    let r12 = r.embed_leg(LegIndex::new(3, leg_dim, 1).unwrap()).unwrap();
    let r23 = r.embed_leg(LegIndex::new(3, leg_dim, 2).unwrap()).unwrap();
    let lhs = r12.matmul(&r23).unwrap().matmul(&r12).unwrap();
    let rhs = r23.matmul(&r12).unwrap().matmul(&r23).unwrap();
    lhs == rhs
}

/// `f(R_12) R_23 R_12 == R_23 R_12 f(R_23)`.
pub fn check_braid_with(r: &SparseMat, f_of_r: &SparseMat, leg_dim: usize) -> bool {
    let leg = |m: &SparseMat, p| m.embed_leg(LegIndex::new(3, leg_dim, p).unwrap()).unwrap();
    let (r12, r23) = (leg(r, 1), leg(r, 2));
    let (f12, f23) = (leg(f_of_r, 1), leg(f_of_r, 2));
    let lhs = f12.matmul(&r23).unwrap().matmul(&r12).unwrap();
    let rhs = r23.matmul(&r12).unwrap().matmul(&f23).unwrap();
    lhs == rhs
}

/// `prod_mu (R - c_mu)`.
fn spectral_product(r: &SparseMat, spectrum: &[SpectrumEntry]) -> SparseMat {
    let dim = r.dim();
    spectrum.iter().fold(SparseMat::identity(dim), |acc, e| {
        let shifted = r.matsub(&SparseMat::scalar(dim, &e.eigenvalue)).unwrap();
        acc.matmul(&shifted).unwrap()
    })
}

pub fn build_rhat(group: GroupSpec) -> Result<BraidMatrix> {
    let group = GroupSpec::new(group.family, group.n)?;
    let mat = match group.family {
        Family::SL => sl_rhat(group.n),
        Family::SO | Family::Sp => frt_rhat(group),
    };
    let spectrum = declared_spectrum(group);
    let fail = |reason: &str| Error::Construction {
        group: group.to_string(),
        reason: reason.to_string(),
    };
    if spectrum.iter().map(|e| e.expected_rank).sum::<usize>() != group.n * group.n {
        return Err(fail("declared ranks do not sum to N^2"));
    }
    if !check_braid(&mat, group.n) {
        return Err(fail("braid equation violated"));
    }
    if !spectral_product(&mat, &spectrum).is_zero() {
        return Err(fail("declared spectrum does not annihilate the matrix"));
    }
    Ok(BraidMatrix {
        group,
        mat,
        spectrum,
    })
}

/// Inverse braid matrix; the closed form for `SL`, exact elimination
/// otherwise. `R R^-1 = 1` is verified in both cases.
pub fn build_rhat_inverse(r: &BraidMatrix) -> Result<SparseMat> {
    let inv = match r.group.family {
        Family::SL => sl_rhat_inverse(r.group.n),
        _ => r.mat.inverse()?,
    };
    if r.mat.matmul(&inv)? != SparseMat::identity(r.mat.dim()) {
        return Err(Error::Construction {
            group: r.group.to_string(),
            reason: "R R^-1 != 1".into(),
        });
    }
    Ok(inv)
}

#[derive(Clone, Debug)]
pub struct ProjectorSet {
    pub projectors: Vec<(ProjLabel, SparseMat)>,
    pub plus: SparseMat,
    pub minus: SparseMat,
}

impl ProjectorSet {
    pub fn get(&self, label: ProjLabel) -> Option<&SparseMat> {
        self.projectors
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, m)| m)
    }
}

/// Lagrange projector `prod_{nu != mu} (R - c_nu) / (c_mu - c_nu)`.
pub fn lagrange_projector(r: &SparseMat, eigenvalues: &[RatFunc], mu: usize) -> Result<SparseMat> {
    let dim = r.dim();
    let mut acc = SparseMat::identity(dim);
    for (nu, c) in eigenvalues.iter().enumerate() {
        if nu == mu {
            continue;
        }
        let denom = &eigenvalues[mu] - c;
        let scale = denom.inv()?;
        let factor = r.matsub(&SparseMat::scalar(dim, c))?.scale(&scale);
        acc = acc.matmul(&factor)?;
    }
    Ok(acc)
}

pub fn spectral_projectors(r: &BraidMatrix) -> Result<ProjectorSet> {
    let group = r.group;
    let dim = r.mat.dim();
    let fail = |reason: String| Error::Construction {
        group: group.to_string(),
        reason,
    };
    let eigen: Vec<RatFunc> = r.spectrum.iter().map(|e| e.eigenvalue.clone()).collect();
    for a in 0..eigen.len() {
        for b in 0..a {
            if eigen[a] == eigen[b] {
                return Err(fail(format!("repeated eigenvalue {}", eigen[a])));
            }
        }
    }
    let mut projectors = Vec::new();
    for (mu, entry) in r.spectrum.iter().enumerate() {
        let p = lagrange_projector(&r.mat, &eigen, mu)?;
        let rank = p.rank();
        if rank != entry.expected_rank {
            return Err(fail(format!(
                "projector {} has rank {rank}, expected {}",
                entry.label, entry.expected_rank
            )));
        }
        projectors.push((entry.label, p));
    }
    let mut total = SparseMat::zero(dim);
    for (i, (li, pi)) in projectors.iter().enumerate() {
        total = total.matadd(pi)?;
        for (j, (lj, pj)) in projectors.iter().enumerate() {
            let prod = pi.matmul(pj)?;
            let ok = if i == j { &prod == pi } else { prod.is_zero() };
            if !ok {
                return Err(fail(format!("P^{li} P^{lj} violates orthogonality")));
            }
        }
    }
    if total != SparseMat::identity(dim) {
        return Err(fail("projectors do not sum to 1".into()));
    }
    let (plus, minus) = assemble_pm(&projectors, group)?;
    Ok(ProjectorSet {
        projectors,
        plus,
        minus,
    })
}

/// `P^+` and `P^-` per family: `SL (S | A)`, `SO (s + t | a)`, `Sp (s' | a' + t')`.
pub fn assemble_pm(
    projectors: &[(ProjLabel, SparseMat)],
    group: GroupSpec,
) -> Result<(SparseMat, SparseMat)> {
    let get = |label: ProjLabel| {
        projectors
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, m)| m.clone())
            .ok_or_else(|| Error::MissingProjector {
                group: group.to_string(),
                label: label.to_string(),
            })
    };
    match group.family {
        Family::SL => Ok((get(ProjLabel::S)?, get(ProjLabel::A)?)),
        Family::SO => Ok((
            get(ProjLabel::Sym)?.matadd(&get(ProjLabel::Trace)?)?,
            get(ProjLabel::Anti)?,
        )),
        Family::Sp => Ok((
            get(ProjLabel::SymPrime)?,
            get(ProjLabel::AntiPrime)?.matadd(&get(ProjLabel::TracePrime)?)?,
        )),
    }
}

/// Sum of the projectors whose eigenvalue has the given sign for `q` just
/// above 1.
pub fn projector_by_sign(r: &BraidMatrix, ps: &ProjectorSet, sign: Ordering) -> SparseMat {
    r.spectrum
        .iter()
        .filter(|e| e.eigenvalue.sign_near_one() == sign)
        .fold(SparseMat::zero(r.mat.dim()), |acc, e| {
            acc.matadd(ps.get(e.label).expect("projector present"))
                .unwrap()
        })
}

/// Raised and lowered `SO_q(N)` metric, `upper[i][j] = C^{ij}`,
/// `lower[i][j] = C_{ij}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    pub n: usize,
    pub upper: Vec<Vec<RatFunc>>,
    pub lower: Vec<Vec<RatFunc>>,
}

impl Metric {
    /// `C^{ij} C_{hk} / (C^{lm} C_{lm})`.
    pub fn trace_projector(&self) -> SparseMat {
        let n = self.n;
        let norm: RatFunc = (0..n)
            .flat_map(|l| (0..n).map(move |m| (l, m)))
            .fold(RatFunc::zero(), |acc, (l, m)| {
                &acc + &(&self.upper[l][m] * &self.lower[l][m])
            });
        let inv = norm.inv().expect("nondegenerate metric");
        let mut p = SparseMat::zero(n * n);
        for i in 0..n {
            for j in 0..n {
                for h in 0..n {
                    for k in 0..n {
                        let v = &(&self.upper[i][j] * &self.lower[h][k]) * &inv;
                        p.set(pair(n, i, j), pair(n, h, k), v);
                    }
                }
            }
        }
        p
    }

    /// Matrix `T` of the conjugation `A+_i -> A+_j T^{ji}` for real `q`.
    ///
    /// For odd `N` the braid matrix built here differs from the
    /// half-integer-exponent one by a real diagonal change of basis that is
    /// not Laurent; in this basis the real metric has unit entries on the
    /// support of `C`. For even `N`, `C` itself is related to it by a
    /// symmetry of `R` and works as well.
    pub fn star_matrix(&self) -> Vec<Vec<RatFunc>> {
        self.upper
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        if v.is_zero() {
                            RatFunc::zero()
                        } else {
                            RatFunc::one()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn scaled(&self, upper: &RatFunc, lower: &RatFunc) -> Metric {
        let sc = |m: &Vec<Vec<RatFunc>>, c: &RatFunc| {
            m.iter()
                .map(|row| row.iter().map(|v| v * c).collect())
                .collect()
        };
        Metric {
            n: self.n,
            upper: sc(&self.upper, upper),
            lower: sc(&self.lower, lower),
        }
    }
}

/// Rank-1 factorization of the trace projector `P^t`.
///
/// The raised metric is normalized by `C^{1N} = 1`; the lowered one by
/// `(C^{..} C_{..})^1_1 = 1`, which makes it the matrix inverse of the raised
/// metric for the `SO_q(N)` braid matrices built here.
pub fn extract_metric(ps: &ProjectorSet, n: usize) -> Result<Metric> {
    let pt = ps.get(ProjLabel::Trace).ok_or(Error::MissingProjector {
        group: format!("so{n}"),
        label: "t".into(),
    })?;
    let rank = pt.rank();
    if rank != 1 {
        return Err(Error::NotRankOne(rank));
    }
    let anchor = pair(n, 0, n - 1);
    // column direction gives C^{ij}, row direction gives C_{hk}
    let col = (0..n * n)
        .find(|&c| !pt.get(anchor, c).is_zero())
        .ok_or_else(|| Error::Construction {
            group: format!("so{n}"),
            reason: "trace projector vanishes at the (1, N) row".into(),
        })?;
    let pivot = pt.get(anchor, col);
    let upper_scale = pivot.inv()?;
    let mut upper = vec![vec![RatFunc::zero(); n]; n];
    let mut lower = vec![vec![RatFunc::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            upper[i][j] = &pt.get(pair(n, i, j), col) * &upper_scale;
            lower[i][j] = pt.get(anchor, pair(n, i, j));
        }
    }
    // (upper . lower)[0][0] = sum_j C^{0j} C_{j0}
    let s = (0..n).fold(RatFunc::zero(), |acc, j| {
        &acc + &(&upper[0][j] * &lower[j][0])
    });
    let lower_scale = s.inv().map_err(|_| Error::Construction {
        group: format!("so{n}"),
        reason: "cannot normalize the lowered metric".into(),
    })?;
    for row in lower.iter_mut() {
        for v in row.iter_mut() {
            *v = &*v * &lower_scale;
        }
    }
    Ok(Metric { n, upper, lower })
}

/// Braid matrix of `GL_q(M) x SL_q(N)` on collective indices `(alpha, a)`:
/// `(R_M^variant (x) R_N)` with legs regrouped from `(alpha, beta, a, b)` to
/// `(alpha, a, beta, b)`.
pub fn glm_rhat(m: usize, n: usize, variant: i32) -> SparseMat {
    let rm = if variant >= 0 {
        sl_rhat(m)
    } else {
        sl_rhat_inverse(m)
    };
    regroup_pair(&rm.kron(&sl_rhat(n)), m, n)
}

/// Reorders `(alpha, beta, a, b)` to `(alpha, a, beta, b)`.
pub fn regroup_pair(mat: &SparseMat, m: usize, n: usize) -> SparseMat {
    mat.permute_legs(&[m, m, n, n], &[0, 2, 1, 3])
        .expect("consistent leg sizes")
}

/// `SL_q(M)` projectors `(P^S, P^A)` for any `M >= 1` (`P^A = 0` at `M = 1`).
pub fn sl_projectors(m: usize) -> (SparseMat, SparseMat) {
    let r = sl_rhat(m);
    let eig = [RatFunc::q(), -RatFunc::q_pow(-1)];
    (
        lagrange_projector(&r, &eig, 0).unwrap(),
        lagrange_projector(&r, &eig, 1).unwrap(),
    )
}
