//! Quadratic presentations of deformed Weyl/Clifford algebras.
//!
//! Relations are stored as a spanning set of the relation space: each
//! [`Relation`] is a linear combination of degree-2 words plus a multiple of
//! the unit. Two presentations are equal when their spans agree, which is
//! what [`AlgebraPresentation::sector_span`] and the span comparisons in this
//! module check.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::braid::{
    build_rhat, build_rhat_inverse, glm_rhat, pair, regroup_pair, sl_projectors, sl_rhat,
    sl_rhat_inverse, spectral_projectors, BraidMatrix, GroupSpec, ProjectorSet,
};
use crate::error::{Error, Result};
use crate::linalg::{RowSpace, SparseVec};
use crate::scalar::RatFunc;
use crate::tensor::SparseMat;

pub type GenId = u16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Creator,
    Annihilator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorSymbol {
    pub kind: Kind,
    /// 1-based copy index.
    pub copy: usize,
    /// 1-based mode index.
    pub mode: usize,
    /// 0 bosonic, 1 fermionic; depends on the copy only.
    pub parity: u8,
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Creator => write!(f, "A+[{},{}]", self.copy, self.mode),
            Kind::Annihilator => write!(f, "A[{},{}]", self.copy, self.mode),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Weyl,
    Clifford,
}

impl Sign {
    pub fn parity(self) -> u8 {
        match self {
            Sign::Weyl => 0,
            Sign::Clifford => 1,
        }
    }

    pub fn from_parity(p: u8) -> Self {
        if p == 0 {
            Sign::Weyl
        } else {
            Sign::Clifford
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Weyl => "weyl",
            Sign::Clifford => "clifford",
        })
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "weyl" | "+" | "0" => Ok(Sign::Weyl),
            "clifford" | "-" | "1" => Ok(Sign::Clifford),
            _ => Err(Error::Config(format!("unknown sign '{s}'"))),
        }
    }
}

/// Parity and braid-matrix variant of one copy in a chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CopyFlavor {
    pub sign: Sign,
    /// `+1`: cross relation built from `R`, `-1`: from `R^-1`.
    pub variant: i8,
}

impl CopyFlavor {
    pub fn new(sign: Sign, variant: i8) -> Self {
        CopyFlavor { sign, variant }
    }
}

/// How a pair of copies `alpha < beta` is braided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Braiding {
    /// `alpha` precedes `beta` in the chain (the default).
    Over,
    /// The pair is ordered the other way round: all cross relations of the
    /// pair are built as if `beta < alpha`.
    Under,
    /// Creator-creator relation built from `R^-1` while the other cross
    /// relations keep `R`; inconsistent, used as a negative control.
    MixedInverse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainParams {
    pub flavors: Vec<CopyFlavor>,
    /// `c_{alpha beta}` for `alpha < beta` (1-based); missing entries are 1.
    #[serde(with = "pair_map")]
    pub couplings: BTreeMap<(usize, usize), RatFunc>,
    #[serde(with = "pair_map")]
    pub braidings: BTreeMap<(usize, usize), Braiding>,
}

/// Maps keyed by copy pairs, serialized as `[[alpha, beta], value]` lists so
/// they survive formats that only allow string keys.
mod pair_map {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<V: Serialize, S: Serializer>(
        map: &BTreeMap<(usize, usize), V>,
        ser: S,
    ) -> Result<S::Ok, S::Error> {
        ser.collect_seq(map.iter().map(|(&(a, b), v)| ([a, b], v)))
    }

    pub fn deserialize<'de, V: Deserialize<'de>, D: Deserializer<'de>>(
        de: D,
    ) -> Result<BTreeMap<(usize, usize), V>, D::Error> {
        let list: Vec<([usize; 2], V)> = Vec::deserialize(de)?;
        Ok(list.into_iter().map(|([a, b], v)| ((a, b), v)).collect())
    }
}

impl ChainParams {
    pub fn uniform(m: usize, sign: Sign, variant: i8) -> Self {
        ChainParams::from_flavors(vec![CopyFlavor::new(sign, variant); m])
    }

    pub fn from_flavors(flavors: Vec<CopyFlavor>) -> Self {
        ChainParams {
            flavors,
            couplings: BTreeMap::new(),
            braidings: BTreeMap::new(),
        }
    }

    pub fn m(&self) -> usize {
        self.flavors.len()
    }

    pub fn coupling(&self, a: usize, b: usize) -> RatFunc {
        self.couplings
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(RatFunc::one)
    }

    pub fn braiding(&self, a: usize, b: usize) -> Braiding {
        self.braidings
            .get(&(a, b))
            .copied()
            .unwrap_or(Braiding::Over)
    }

    /// Non-trivial couplings `c_{alpha beta} = (1 + q^(2 (beta - alpha))) / 2`,
    /// invertible, equal to 1 at `q = 1`, and invariant under reversing the
    /// order of the copies.
    pub fn with_generic_couplings(mut self) -> Self {
        let m = self.m();
        for a in 1..=m {
            for b in a + 1..=m {
                let c = (RatFunc::one() + RatFunc::q_pow(2 * (b - a) as i32))
                    * RatFunc::int(2).inv().unwrap();
                self.couplings.insert((a, b), c);
            }
        }
        self
    }
}

/// A relation `sum c_{xy} x y + c_0 1 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: BTreeMap<(GenId, GenId), RatFunc>,
    pub constant: RatFunc,
    pub tag: String,
}

impl Relation {
    pub fn new(tag: impl Into<String>) -> Self {
        Relation {
            terms: BTreeMap::new(),
            constant: RatFunc::zero(),
            tag: tag.into(),
        }
    }

    pub fn add(&mut self, x: GenId, y: GenId, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((x, y)).or_default();
        *e = &*e + c;
        if e.is_zero() {
            self.terms.remove(&(x, y));
        }
    }

    pub fn add_constant(&mut self, c: &RatFunc) {
        self.constant = &self.constant + c;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn to_vec(&self) -> SparseVec<RelKey> {
        let mut v: SparseVec<RelKey> = self
            .terms
            .iter()
            .map(|(&(x, y), c)| (RelKey::Word(x, y), c.clone()))
            .collect();
        if !self.constant.is_zero() {
            v.insert(RelKey::One, self.constant.clone());
        }
        v
    }

    pub fn map_coeffs(&self, f: impl Fn(&RatFunc) -> Result<RatFunc>) -> Result<Relation> {
        let mut out = Relation::new(self.tag.clone());
        for (&(x, y), c) in &self.terms {
            out.add(x, y, &f(c)?);
        }
        out.constant = f(&self.constant)?;
        Ok(out)
    }
}

/// Coordinate of the relation space: the unit or a degree-2 word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelKey {
    One,
    Word(GenId, GenId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sector {
    CreatorCreator,
    AnnihilatorAnnihilator,
    Mixed,
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sector::CreatorCreator => "creator",
            Sector::AnnihilatorAnnihilator => "annihilator",
            Sector::Mixed => "mixed",
        })
    }
}

/// What produced a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Source {
    Chain {
        group: GroupSpec,
        params: ChainParams,
    },
    Glm {
        m: usize,
        n: usize,
        sign: Sign,
        inverse_variant: bool,
    },
    GlmExpanded {
        m: usize,
        n: usize,
        sign: Sign,
    },
    Candidate {
        description: String,
    },
}

#[derive(Clone, Debug)]
pub struct AlgebraPresentation {
    pub source: Source,
    pub copies: usize,
    pub modes: usize,
    pub generators: Vec<GeneratorSymbol>,
    pub relations: Vec<Relation>,
}

impl AlgebraPresentation {
    /// Generators sorted by `(copy, kind, mode)`.
    pub fn with_generators(source: Source, parities: &[u8], modes: usize) -> Self {
        let mut generators = Vec::new();
        for (a, &p) in parities.iter().enumerate() {
            for kind in [Kind::Creator, Kind::Annihilator] {
                for i in 1..=modes {
                    generators.push(GeneratorSymbol {
                        kind,
                        copy: a + 1,
                        mode: i,
                        parity: p,
                    });
                }
            }
        }
        AlgebraPresentation {
            source,
            copies: parities.len(),
            modes,
            generators,
            relations: Vec::new(),
        }
    }

    /// Id of `A+[copy, mode]` / `A[copy, mode]`, both 1-based.
    pub fn gen(&self, kind: Kind, copy: usize, mode: usize) -> GenId {
        let k = match kind {
            Kind::Creator => 0,
            Kind::Annihilator => 1,
        };
        (((copy - 1) * 2 + k) * self.modes + (mode - 1)) as GenId
    }

    pub fn cre(&self, copy: usize, mode: usize) -> GenId {
        self.gen(Kind::Creator, copy, mode)
    }

    pub fn ann(&self, copy: usize, mode: usize) -> GenId {
        self.gen(Kind::Annihilator, copy, mode)
    }

    pub fn symbol(&self, g: GenId) -> &GeneratorSymbol {
        &self.generators[g as usize]
    }

    pub fn push(&mut self, r: Relation) {
        if !r.is_zero() {
            self.relations.push(r);
        }
    }

    pub fn sector_of(&self, r: &Relation) -> Sector {
        let kinds: Vec<Kind> = r
            .terms
            .keys()
            .flat_map(|&(x, y)| [self.symbol(x).kind, self.symbol(y).kind])
            .collect();
        if !r.constant.is_zero() || kinds.is_empty() {
            return Sector::Mixed;
        }
        if kinds.iter().all(|k| *k == Kind::Creator) {
            Sector::CreatorCreator
        } else if kinds.iter().all(|k| *k == Kind::Annihilator) {
            Sector::AnnihilatorAnnihilator
        } else {
            Sector::Mixed
        }
    }

    pub fn span(&self) -> RowSpace<RelKey> {
        let mut s = RowSpace::new();
        for r in &self.relations {
            s.insert(r.to_vec());
        }
        s
    }

    pub fn sector_span(&self, sector: Sector) -> RowSpace<RelKey> {
        let mut s = RowSpace::new();
        for r in self
            .relations
            .iter()
            .filter(|r| self.sector_of(r) == sector)
        {
            s.insert(r.to_vec());
        }
        s
    }

    pub fn parities(&self) -> Vec<u8> {
        (1..=self.copies)
            .map(|a| self.symbol(self.cre(a, 1)).parity)
            .collect()
    }

    /// Dimension of the degree-`d` part of the classical algebra on the same
    /// generators: coefficient of `t^d` in `(1 - t)^-b (1 + t)^f`.
    pub fn classical_series(&self, d: usize) -> u128 {
        let f = self.generators.iter().filter(|g| g.parity == 1).count();
        let b = self.generators.len() - f;
        classical_count(b, f, d)
    }

    /// Canonical text dump: one relation per line, terms ordered by
    /// `(copy, kind, mode)` of both factors, the unit last.
    /// Structured form of [`dump`](Self::dump); coefficients are canonical strings.
    pub fn to_json(&self) -> serde_json::Value {
        let relations: Vec<serde_json::Value> = self
            .relations
            .iter()
            .map(|r| {
                let terms: Vec<serde_json::Value> = r
                    .terms
                    .iter()
                    .map(|(&(x, y), c)| {
                        serde_json::json!({
                            "word": format!("{}{}", self.symbol(x), self.symbol(y)),
                            "coefficient": c.to_string(),
                        })
                    })
                    .collect();
                serde_json::json!({"tag": r.tag, "terms": terms, "constant": r.constant.to_string()})
            })
            .collect();
        serde_json::json!({
            "source": self.source,
            "copies": self.copies,
            "modes": self.modes,
            "generators": self.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "relations": relations,
        })
    }

    pub fn dump(&self) -> String {
        let mut s = String::new();
        for r in &self.relations {
            let _ = write!(s, "[{}] ", r.tag);
            let mut first = true;
            for (&(x, y), c) in &r.terms {
                if !first {
                    s.push_str(" + ");
                }
                first = false;
                let _ = write!(s, "({c}) * {}{}", self.symbol(x), self.symbol(y));
            }
            if !r.constant.is_zero() {
                if !first {
                    s.push_str(" + ");
                }
                let _ = write!(s, "({}) * 1", r.constant);
            }
            s.push('\n');
        }
        s
    }
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Coefficient of `t^d` in `(1 - t)^-bosons (1 + t)^fermions`.
pub fn classical_count(bosons: usize, fermions: usize, d: usize) -> u128 {
    (0..=d.min(fermions))
        .map(|k| {
            let rest = (d - k) as u128;
            let sym = if bosons == 0 {
                u128::from(rest == 0)
            } else {
                binomial(bosons as u128 - 1 + rest, rest)
            };
            sym * binomial(fermions as u128, k as u128)
        })
        .sum()
}

/// Braid matrix, inverse and projectors of one group, built once.
#[derive(Clone, Debug)]
pub struct GroupData {
    pub braid: BraidMatrix,
    pub inverse: SparseMat,
    pub projectors: ProjectorSet,
}

impl GroupData {
    pub fn build(group: GroupSpec) -> Result<Self> {
        let braid = build_rhat(group)?;
        let inverse = build_rhat_inverse(&braid)?;
        let projectors = spectral_projectors(&braid)?;
        Ok(GroupData {
            braid,
            inverse,
            projectors,
        })
    }

    pub fn group(&self) -> GroupSpec {
        self.braid.group
    }

    pub fn rhat(&self) -> &SparseMat {
        &self.braid.mat
    }

    /// `P^-` for Weyl, `P^+` for Clifford: the projector whose image spans
    /// the creator relations.
    pub fn relation_projector(&self, sign: Sign) -> &SparseMat {
        match sign {
            Sign::Weyl => &self.projectors.minus,
            Sign::Clifford => &self.projectors.plus,
        }
    }

    /// Eigenvalues whose sign must be unique: negative for Weyl, positive
    /// for Clifford.
    pub fn eigenvalues_of_required_sign(&self, sign: Sign) -> Vec<RatFunc> {
        let want = match sign {
            Sign::Weyl => std::cmp::Ordering::Less,
            Sign::Clifford => std::cmp::Ordering::Greater,
        };
        self.braid
            .spectrum
            .iter()
            .filter(|e| e.expected_rank > 0 && e.eigenvalue.sign_near_one() == want)
            .map(|e| e.eigenvalue.clone())
            .collect()
    }

    /// Matrix `S` of the cross relation `A^i A+_j = delta + S^{ih}_{jk} A+_h A^k`:
    /// `-c^-1 R` (variant +1) or `-c R^-1` (variant -1), `c` the unique
    /// eigenvalue of the required sign.
    pub fn cross_matrix(&self, sign: Sign, variant: i8) -> Result<SparseMat> {
        let eig = self.eigenvalues_of_required_sign(sign);
        if eig.len() != 1 {
            return Err(Error::Inadmissible {
                group: self.group().to_string(),
                sign: sign.to_string(),
                reason: format!(
                    "no satisfactory definitions exist: {} eigenvalues of the required sign ({}), need exactly one",
                    eig.len(),
                    eig.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")
                ),
            });
        }
        let c = &eig[0];
        Ok(if variant >= 0 {
            self.rhat().scale(&-c.inv()?)
        } else {
            self.inverse.scale(&-c)
        })
    }
}

fn delta(i: usize, j: usize) -> RatFunc {
    if i == j {
        RatFunc::one()
    } else {
        RatFunc::zero()
    }
}

/// Creator relations `sum_{ij} P^{ij}_{hk} A+_i A+_j = 0`, one per column.
fn push_creator_relations(pres: &mut AlgebraPresentation, p: &SparseMat, copy: usize, tag: &str) {
    let n = pres.modes;
    let pt = p.transpose();
    for h in 0..n {
        for k in 0..n {
            let mut r = Relation::new(tag);
            for (&row, c) in pt.row(pair(n, h, k)) {
                let (i, j) = (row / n, row % n);
                r.add(pres.cre(copy, i + 1), pres.cre(copy, j + 1), c);
            }
            pres.push(r);
        }
    }
}

/// Annihilator relations `sum_{hk} P^{ij}_{hk} A^k A^h = 0`, one per row.
fn push_annihilator_relations(
    pres: &mut AlgebraPresentation,
    p: &SparseMat,
    copy: usize,
    tag: &str,
) {
    let n = pres.modes;
    for i in 0..n {
        for j in 0..n {
            let mut r = Relation::new(tag);
            for (&col, c) in p.row(pair(n, i, j)) {
                let (h, k) = (col / n, col % n);
                r.add(pres.ann(copy, k + 1), pres.ann(copy, h + 1), c);
            }
            pres.push(r);
        }
    }
}

/// `A^{a,i} A+_{b,j} - delta_{ab} delta^i_j - sum S^{ih}_{jk} A+_{c,h} A^{d,k}`.
#[allow(clippy::too_many_arguments)]
fn push_cross_relations(
    pres: &mut AlgebraPresentation,
    s: &SparseMat,
    ann_copy: usize,
    cre_copy: usize,
    rhs_cre_copy: usize,
    rhs_ann_copy: usize,
    with_delta: bool,
    tag: &str,
) {
    let n = pres.modes;
    for i in 0..n {
        for j in 0..n {
            let mut r = Relation::new(tag);
            r.add(
                pres.ann(ann_copy, i + 1),
                pres.cre(cre_copy, j + 1),
                &RatFunc::one(),
            );
            if with_delta {
                r.add_constant(&-delta(i, j));
            }
            for h in 0..n {
                for (&col, c) in s.row(pair(n, i, h)) {
                    let (jj, k) = (col / n, col % n);
                    if jj != j {
                        continue;
                    }
                    r.add(
                        pres.cre(rhs_cre_copy, h + 1),
                        pres.ann(rhs_ann_copy, k + 1),
                        &-c,
                    );
                }
            }
            pres.push(r);
        }
    }
}

/// `A+_{a,i} A+_{b,j} - f sum_{hk} B^{hk}_{ij} A+_{b,h} A+_{a,k}`.
fn push_creator_braiding(
    pres: &mut AlgebraPresentation,
    b: &SparseMat,
    factor: &RatFunc,
    first: usize,
    second: usize,
    tag: &str,
) {
    let n = pres.modes;
    let bt = b.transpose();
    for i in 0..n {
        for j in 0..n {
            let mut r = Relation::new(tag);
            r.add(
                pres.cre(first, i + 1),
                pres.cre(second, j + 1),
                &RatFunc::one(),
            );
            for (&row, c) in bt.row(pair(n, i, j)) {
                let (h, k) = (row / n, row % n);
                r.add(
                    pres.cre(second, h + 1),
                    pres.cre(first, k + 1),
                    &-(factor * c),
                );
            }
            pres.push(r);
        }
    }
}

/// `A^{a,j} A^{b,i} - f sum_{hk} B^{ij}_{hk} A^{b,k} A^{a,h}`.
fn push_annihilator_braiding(
    pres: &mut AlgebraPresentation,
    b: &SparseMat,
    factor: &RatFunc,
    first: usize,
    second: usize,
    tag: &str,
) {
    let n = pres.modes;
    for i in 0..n {
        for j in 0..n {
            let mut r = Relation::new(tag);
            r.add(
                pres.ann(first, j + 1),
                pres.ann(second, i + 1),
                &RatFunc::one(),
            );
            for (&col, c) in b.row(pair(n, i, j)) {
                let (h, k) = (col / n, col % n);
                r.add(
                    pres.ann(second, k + 1),
                    pres.ann(first, h + 1),
                    &-(factor * c),
                );
            }
            pres.push(r);
        }
    }
}

fn check_chain_params(params: &ChainParams) -> Result<()> {
    if params.m() == 0 {
        return Err(Error::Config("a chain needs at least one copy".into()));
    }
    for (&(a, b), c) in &params.couplings {
        if !(1 <= a && a < b && b <= params.m()) {
            return Err(Error::Config(format!(
                "coupling index ({a},{b}) out of range"
            )));
        }
        if c.is_zero() {
            return Err(Error::Config(format!(
                "coupling c_{a}{b} must be invertible"
            )));
        }
        if !c.specialize(1).is_ok_and(|v| v.is_one()) {
            return Err(Error::Config(format!(
                "coupling c_{a}{b} = {c} must tend to 1 at q = 1"
            )));
        }
    }
    for f in &params.flavors {
        if f.variant != 1 && f.variant != -1 {
            return Err(Error::Config("variant must be +1 or -1".into()));
        }
    }
    Ok(())
}

/// Single copy: `P^-+ A+A+ = 0`, `P^-+ A A = 0`, `A A+ = 1 + S A+ A`.
pub fn gen_single_copy(group: GroupSpec, sign: Sign, variant: i8) -> Result<AlgebraPresentation> {
    let data = GroupData::build(group)?;
    gen_chain_with(&data, &ChainParams::uniform(1, sign, variant))
}

pub fn gen_chain(group: GroupSpec, params: &ChainParams) -> Result<AlgebraPresentation> {
    let data = GroupData::build(group)?;
    gen_chain_with(&data, params)
}

/// Braided chain of copies, using prebuilt group data.
pub fn gen_chain_with(data: &GroupData, params: &ChainParams) -> Result<AlgebraPresentation> {
    let group = data.group();
    check_chain_params(params)?;
    let parities: Vec<u8> = params.flavors.iter().map(|f| f.sign.parity()).collect();
    let mut pres = AlgebraPresentation::with_generators(
        Source::Chain {
            group,
            params: params.clone(),
        },
        &parities,
        group.n,
    );
    for (idx, flavor) in params.flavors.iter().enumerate() {
        let a = idx + 1;
        let p = data.relation_projector(flavor.sign);
        push_creator_relations(&mut pres, p, a, "creators");
        push_annihilator_relations(&mut pres, p, a, "annihilators");
        let s = data.cross_matrix(flavor.sign, flavor.variant)?;
        push_cross_relations(&mut pres, &s, a, a, a, a, true, "diagonal");
    }
    let r = data.rhat();
    let rinv = &data.inverse;
    let m = params.m();
    for a in 1..=m {
        for b in a + 1..=m {
            let sigma = if parities[a - 1] * parities[b - 1] == 1 {
                RatFunc::int(-1)
            } else {
                RatFunc::one()
            };
            let c = params.coupling(a, b);
            let (lo, hi, f) = match params.braiding(a, b) {
                Braiding::Over | Braiding::MixedInverse => (a, b, &sigma * &c),
                Braiding::Under => (b, a, &sigma * &c),
            };
            let creator_b = if params.braiding(a, b) == Braiding::MixedInverse {
                rinv
            } else {
                r
            };
            let finv = &sigma * &c.inv()?;
            push_creator_braiding(&mut pres, creator_b, &f, lo, hi, "cross-creators");
            push_annihilator_braiding(&mut pres, r, &f, lo, hi, "cross-annihilators");
            push_cross_relations(
                &mut pres,
                &r.scale(&f),
                hi,
                lo,
                lo,
                hi,
                false,
                "cross-mixed-r",
            );
            push_cross_relations(
                &mut pres,
                &rinv.scale(&finv),
                lo,
                hi,
                hi,
                lo,
                false,
                "cross-mixed-rinv",
            );
        }
    }
    Ok(pres)
}

/// Single copy with an arbitrary cross-relation matrix `S`; used to probe
/// inadmissible cases.
pub fn single_copy_with_cross(data: &GroupData, sign: Sign, s: &SparseMat) -> AlgebraPresentation {
    let mut pres = AlgebraPresentation::with_generators(
        Source::Candidate {
            description: format!("{} {sign} with explicit S", data.group()),
        },
        &[sign.parity()],
        data.group().n,
    );
    let p = data.relation_projector(sign);
    push_creator_relations(&mut pres, p, 1, "creators");
    push_annihilator_relations(&mut pres, p, 1, "annihilators");
    push_cross_relations(&mut pres, s, 1, 1, 1, 1, true, "diagonal");
    pres
}

/// The `GL_q(M) x SL_q(N)` projectors on collective indices:
/// `(P^-, P^+)` with `P^- = P^S_M (x) P^A + P^A_M (x) P^S` and
/// `P^+ = P^A_M (x) P^A + P^S_M (x) P^S`.
pub fn glm_projectors(m: usize, n: usize) -> (SparseMat, SparseMat) {
    let (sm, am) = sl_projectors(m);
    let (s, a) = sl_projectors(n);
    let minus = sm.kron(&a).matadd(&am.kron(&s)).unwrap();
    let plus = am.kron(&a).matadd(&sm.kron(&s)).unwrap();
    (regroup_pair(&minus, m, n), regroup_pair(&plus, m, n))
}

/// Relations of the `GL_q(M) x SL_q(N)`-covariant algebra. With
/// `inverse_variant`, the cross relation uses the inverse braid matrix.
pub fn gen_glm(
    m: usize,
    n: usize,
    sign: Sign,
    inverse_variant: bool,
) -> Result<AlgebraPresentation> {
    if m == 0 || n == 0 {
        return Err(Error::Config("M and N must be at least 1".into()));
    }
    let mn = m * n;
    let mut pres = AlgebraPresentation::with_generators(
        Source::Glm {
            m,
            n,
            sign,
            inverse_variant,
        },
        &vec![sign.parity(); m],
        n,
    );
    let (pminus, pplus) = glm_projectors(m, n);
    let p = match sign {
        Sign::Weyl => pminus,
        Sign::Clifford => pplus,
    };
    let big = match sign {
        Sign::Weyl => glm_rhat(m, n, 1),
        Sign::Clifford => glm_rhat(m, n, -1),
    };
    // A^A A+_B = delta + S A+_C A^D with S = +R_+ (Weyl) or -R_- (Clifford);
    // the alternative uses +R_+^-1 or -R_-^-1.
    let s = match (sign, inverse_variant) {
        (Sign::Weyl, false) => big,
        (Sign::Clifford, false) => big.scale(&RatFunc::int(-1)),
        (Sign::Weyl, true) => big.inverse()?,
        (Sign::Clifford, true) => big.inverse()?.scale(&RatFunc::int(-1)),
    };
    let coll = |x: usize| (x / n + 1, x % n + 1);
    let pt = p.transpose();
    for col in 0..mn * mn {
        let mut r = Relation::new("glm-creators");
        for (&row, c) in pt.row(col) {
            let ((a, i), (b, j)) = (coll(row / mn), coll(row % mn));
            r.add(pres.cre(a, i), pres.cre(b, j), c);
        }
        pres.push(r);
    }
    for row in 0..mn * mn {
        let mut r = Relation::new("glm-annihilators");
        for (&col, c) in p.row(row) {
            let ((a, i), (b, j)) = (coll(col / mn), coll(col % mn));
            r.add(pres.ann(b, j), pres.ann(a, i), c);
        }
        pres.push(r);
    }
    for x in 0..mn {
        for y in 0..mn {
            let mut r = Relation::new("glm-mixed");
            let ((a, i), (b, j)) = (coll(x), coll(y));
            r.add(pres.ann(a, i), pres.cre(b, j), &RatFunc::one());
            r.add_constant(&-delta(x, y));
            for z in 0..mn {
                for (&col, c) in s.row(x * mn + z) {
                    if col / mn != y {
                        continue;
                    }
                    let ((cc, k), (d, l)) = (coll(z), coll(col % mn));
                    r.add(pres.cre(cc, k), pres.ann(d, l), &-c);
                }
            }
            pres.push(r);
        }
    }
    Ok(pres)
}

/// Copy-indexed form of the `GL_q(M) x SL_q(N)` relations, written with the
/// `SL_q(N)` braid matrix only. Checks that its span equals the span of
/// `pres` sector by sector and returns it.
pub fn expand_glm(pres: &AlgebraPresentation) -> Result<AlgebraPresentation> {
    let (m, n, sign) = match pres.source {
        Source::Glm {
            m,
            n,
            sign,
            inverse_variant: false,
        } => (m, n, sign),
        _ => {
            return Err(Error::Config(
                "expand_glm expects a presentation from gen_glm".into(),
            ))
        }
    };
    let explicit = glm_explicit(m, n, sign);
    for sector in [
        Sector::CreatorCreator,
        Sector::AnnihilatorAnnihilator,
        Sector::Mixed,
    ] {
        let a = pres.sector_span(sector);
        let b = explicit.sector_span(sector);
        if !a.same_span(&b) {
            return Err(Error::Mismatch {
                sector: sector.to_string(),
                detail: format!("rank {} vs {}", a.rank(), b.rank()),
            });
        }
    }
    Ok(explicit)
}

/// Same-copy projector relations, `alpha < beta` braidings, and the mixed
/// relations with the `(q - q^-1)` tail over later (Weyl) or earlier
/// (Clifford) copies.
pub fn glm_explicit(m: usize, n: usize, sign: Sign) -> AlgebraPresentation {
    let mut pres = AlgebraPresentation::with_generators(
        Source::GlmExpanded { m, n, sign },
        &vec![sign.parity(); m],
        n,
    );
    let r = sl_rhat(n);
    let rinv = sl_rhat_inverse(n);
    let (ps, pa) = sl_projectors(n);
    // The annihilator braiding is the image of the creator braiding under
    // A+_{alpha,i} -> A^{alpha,i}, hence the inverse matrix.
    let (p, braid, ann_braid, f) = match sign {
        Sign::Weyl => (&pa, &r, &rinv, RatFunc::one()),
        Sign::Clifford => (&ps, &rinv, &r, RatFunc::int(-1)),
    };
    for a in 1..=m {
        push_creator_relations(&mut pres, p, a, "same-copy-creators");
        push_annihilator_relations(&mut pres, p, a, "same-copy-annihilators");
    }
    for a in 1..=m {
        for b in a + 1..=m {
            push_creator_braiding(&mut pres, braid, &f, a, b, "cross-creators");
            push_annihilator_braiding(&mut pres, ann_braid, &f, a, b, "cross-annihilators");
        }
    }
    let (diag, tail, dsign) = match sign {
        Sign::Weyl => (RatFunc::q(), RatFunc::q_minus_qinv(), RatFunc::one()),
        Sign::Clifford => (
            -RatFunc::q_pow(-1),
            RatFunc::q_minus_qinv(),
            RatFunc::int(-1),
        ),
    };
    for a in 1..=m {
        for b in 1..=m {
            if a == b {
                continue;
            }
            push_cross_relations(
                &mut pres,
                &r.scale(&dsign),
                a,
                b,
                b,
                a,
                false,
                "off-diagonal",
            );
        }
    }
    let n2 = n;
    for a in 1..=m {
        for i in 0..n2 {
            for j in 0..n2 {
                let mut rel = Relation::new("diagonal");
                rel.add(pres.ann(a, i + 1), pres.cre(a, j + 1), &RatFunc::one());
                rel.add_constant(&-delta(i, j));
                let others: Vec<usize> = match sign {
                    Sign::Weyl => (a + 1..=m).collect(),
                    Sign::Clifford => (1..a).collect(),
                };
                for h in 0..n2 {
                    for (&col, c) in r.row(pair(n2, i, h)) {
                        if col / n2 != j {
                            continue;
                        }
                        let k = col % n2;
                        rel.add(pres.cre(a, h + 1), pres.ann(a, k + 1), &-(&diag * c));
                        for &b in &others {
                            rel.add(pres.cre(b, h + 1), pres.ann(b, k + 1), &-(&tail * c));
                        }
                    }
                }
                pres.push(rel);
            }
        }
    }
    pres
}

/// Classical relations on the same generators: graded commutators of all
/// pairs, with the unit in `a^{alpha,i} a+_{alpha,i}`.
pub fn classical_relations(pres: &AlgebraPresentation) -> AlgebraPresentation {
    let mut out = AlgebraPresentation {
        source: Source::Candidate {
            description: "classical limit".into(),
        },
        copies: pres.copies,
        modes: pres.modes,
        generators: pres.generators.clone(),
        relations: Vec::new(),
    };
    let count = pres.generators.len() as GenId;
    for x in 0..count {
        for y in 0..count {
            let (gx, gy) = (pres.symbol(x), pres.symbol(y));
            let mut r = Relation::new("classical");
            let s = if gx.parity * gy.parity == 1 { 1 } else { -1 };
            r.add(x, y, &RatFunc::one());
            r.add(y, x, &RatFunc::int(s));
            if gx.copy == gy.copy && gx.mode == gy.mode && gx.kind != gy.kind {
                // a a+ -+ a+ a = 1
                let k = if gx.kind == Kind::Annihilator { -1 } else { -s };
                r.add_constant(&RatFunc::int(k));
            }
            out.push(r);
        }
    }
    out
}

/// Evaluates every coefficient at `q = 1` (couplings included) and compares
/// the resulting span with the classical relations.
pub fn classical_limit_matches(pres: &AlgebraPresentation) -> Result<bool> {
    let mut special = pres.clone();
    special.relations = pres
        .relations
        .iter()
        .map(|r| r.map_coeffs(|c| c.specialize(1)))
        .collect::<Result<_>>()?;
    Ok(special.span().same_span(&classical_relations(pres).span()))
}

/// Per-sector ranks, keyed by sector.
pub fn sector_ranks(pres: &AlgebraPresentation) -> HashMap<Sector, usize> {
    [
        Sector::CreatorCreator,
        Sector::AnnihilatorAnnihilator,
        Sector::Mixed,
    ]
    .into_iter()
    .map(|s| (s, pres.sector_span(s).rank()))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::Family;

    #[test]
    fn classical_counts() {
        // 4 commuting variables: C(3 + d, d)
        let c: Vec<u128> = (0..4).map(|d| classical_count(4, 0, d)).collect();
        assert_eq!(c, vec![1, 4, 10, 20]);
        let e: Vec<u128> = (0..5).map(|d| classical_count(0, 4, d)).collect();
        assert_eq!(e, vec![1, 4, 6, 4, 1]);
        assert_eq!(classical_count(4, 4, 2), 32);
    }

    #[test]
    fn sl2_weyl_cross_coefficient() {
        let pres = gen_single_copy(GroupSpec::sl(2), Sign::Weyl, 1).unwrap();
        // A^1 A+_1 = 1 + q R^{1h}_{1k} A+_h A^k = 1 + q^2 A+_1 A^1 + (q^2 - 1) A+_2 A^2
        let r = pres
            .relations
            .iter()
            .find(|r| {
                r.tag == "diagonal" && r.terms.contains_key(&(pres.ann(1, 1), pres.cre(1, 1)))
            })
            .unwrap();
        assert_eq!(r.constant, RatFunc::int(-1));
        assert_eq!(
            r.terms[&(pres.cre(1, 1), pres.ann(1, 1))],
            -RatFunc::q_pow(2)
        );
        assert_eq!(
            r.terms[&(pres.cre(1, 2), pres.ann(1, 2))],
            -(&RatFunc::q() * &RatFunc::q_minus_qinv())
        );
    }

    #[test]
    fn relation_counts_per_sector() {
        for (g, sign) in [
            (GroupSpec::sl(3), Sign::Weyl),
            (GroupSpec::sl(3), Sign::Clifford),
            (GroupSpec::so(3), Sign::Weyl),
            (GroupSpec::sp(2), Sign::Clifford),
        ] {
            let pres = gen_single_copy(g, sign, 1).unwrap();
            let n = g.n;
            let expected = match sign {
                Sign::Weyl => n * (n - 1) / 2,
                Sign::Clifford => n * (n + 1) / 2,
            };
            let ranks = sector_ranks(&pres);
            assert_eq!(ranks[&Sector::CreatorCreator], expected, "{g} {sign}");
            assert_eq!(
                ranks[&Sector::AnnihilatorAnnihilator],
                expected,
                "{g} {sign}"
            );
            assert_eq!(ranks[&Sector::Mixed], n * n, "{g} {sign}");
        }
    }

    #[test]
    fn inadmissible_pairs_rejected() {
        let e = gen_single_copy(GroupSpec::so(3), Sign::Clifford, 1).unwrap_err();
        assert!(matches!(e, Error::Inadmissible { .. }));
        let e = gen_single_copy(GroupSpec::sp(2), Sign::Weyl, 1).unwrap_err();
        assert!(e.to_string().contains("no satisfactory definitions"));
        let data = GroupData::build(GroupSpec::so(3)).unwrap();
        let e = data.cross_matrix(Sign::Clifford, 1).unwrap_err();
        assert!(e.to_string().contains("2 eigenvalues"), "{e}");
    }

    #[test]
    fn classical_limits() {
        for (g, sign, v) in [
            (GroupSpec::sl(2), Sign::Weyl, 1),
            (GroupSpec::sl(2), Sign::Clifford, -1),
            (GroupSpec::so(3), Sign::Weyl, 1),
            (GroupSpec::sp(1), Sign::Clifford, 1),
        ] {
            let pres = gen_single_copy(g, sign, v).unwrap();
            assert!(classical_limit_matches(&pres).unwrap(), "{g} {sign}");
        }
        let params = ChainParams::from_flavors(vec![
            CopyFlavor::new(Sign::Weyl, 1),
            CopyFlavor::new(Sign::Clifford, 1),
        ])
        .with_generic_couplings();
        let pres = gen_chain(GroupSpec::sl(2), &params).unwrap();
        assert!(classical_limit_matches(&pres).unwrap());
        for sign in [Sign::Weyl, Sign::Clifford] {
            assert!(classical_limit_matches(&gen_glm(2, 2, sign, false).unwrap()).unwrap());
        }
    }

    #[test]
    fn chain_of_one_is_single_copy() {
        let a = gen_single_copy(GroupSpec::sl(2), Sign::Weyl, 1).unwrap();
        let b = gen_chain(GroupSpec::sl(2), &ChainParams::uniform(1, Sign::Weyl, 1)).unwrap();
        assert_eq!(a.relations, b.relations);
    }

    #[test]
    fn glm_creator_rank() {
        let pres = gen_glm(2, 2, Sign::Weyl, false).unwrap();
        assert_eq!(sector_ranks(&pres)[&Sector::CreatorCreator], 6);
        let (pm, pp) = glm_projectors(2, 2);
        assert_eq!(pm.rank(), 6);
        assert_eq!(pp.rank(), 10);
    }

    #[test]
    fn expand_glm_small() {
        for sign in [Sign::Weyl, Sign::Clifford] {
            let pres = gen_glm(2, 2, sign, false).unwrap();
            expand_glm(&pres).unwrap();
        }
    }

    #[test]
    fn glm_with_one_copy_rescales_single_copy() {
        // M = 1: the GL part is the 1x1 matrix (q), so the cross relation
        // uses q R, as does the Weyl single copy (-c^-1 = q).
        let glm = gen_glm(1, 2, Sign::Weyl, false).unwrap();
        let single = gen_single_copy(GroupSpec::sl(2), Sign::Weyl, 1).unwrap();
        assert!(glm.span().same_span(&single.span()));
        // Clifford: -R_- = -q^-1 R, matching -c_+^-1 R with c_+ = q.
        let glm = gen_glm(1, 2, Sign::Clifford, false).unwrap();
        let single = gen_single_copy(GroupSpec::sl(2), Sign::Clifford, 1).unwrap();
        assert!(glm.span().same_span(&single.span()));
    }

    #[test]
    fn dump_format() {
        let pres = gen_single_copy(GroupSpec::sl(2), Sign::Weyl, 1).unwrap();
        let d = pres.dump();
        assert!(
            d.contains("[diagonal] (-q^2) * A+[1,1]A[1,1] + (-q^2 + 1) * A+[1,2]A[1,2] + (1) * A[1,1]A+[1,1] + (-1) * 1"),
            "{d}"
        );
        assert!(d.lines().all(|l| l.starts_with('[')));
    }

    #[test]
    fn bad_chain_params() {
        let mut p = ChainParams::uniform(2, Sign::Weyl, 1);
        p.couplings.insert((1, 2), RatFunc::int(2));
        assert!(matches!(
            gen_chain(GroupSpec::sl(2), &p),
            Err(Error::Config(_))
        ));
        let p = ChainParams::uniform(2, Sign::Clifford, 1);
        assert!(gen_chain(GroupSpec::new(Family::SO, 3).unwrap(), &p).is_err());
    }
}
