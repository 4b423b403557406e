//! Rewriting with quadratic (possibly inhomogeneous) relations: orientation,
//! overlap resolution in degree 3 and normal-word counting.
//!
//! When every degree-3 overlap resolves, the diamond lemma makes the
//! irreducible words a basis, so counting them gives the Hilbert series of
//! the algebra.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{RowSpace, SparseVec};
use crate::relations::{AlgebraPresentation, GenId, GeneratorSymbol, Kind};
use crate::scalar::RatFunc;

/// A word stored as the ranks of its letters, so that the derived order on
/// `Word` is the degree-lexicographic monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<u16>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub type Poly = BTreeMap<Word, RatFunc>;

/// Letter order: creators before annihilators; creators by copy descending
/// then mode ascending, annihilators by copy ascending then mode descending.
#[derive(Clone, Debug)]
pub struct MonomialOrder {
    rank_of: Vec<u16>,
    gen_of: Vec<GenId>,
}

impl MonomialOrder {
    pub fn standard(generators: &[GeneratorSymbol]) -> Self {
        let mut ids: Vec<GenId> = (0..generators.len() as GenId).collect();
        ids.sort_by_key(|&g| {
            let s = &generators[g as usize];
            match s.kind {
                Kind::Creator => (0, usize::MAX - s.copy, s.mode),
                Kind::Annihilator => (1, s.copy, usize::MAX - s.mode),
            }
        });
        MonomialOrder::from_sequence(ids)
    }

    /// Letters listed from smallest to largest.
    pub fn from_sequence(gen_of: Vec<GenId>) -> Self {
        let mut rank_of = vec![0u16; gen_of.len()];
        for (r, &g) in gen_of.iter().enumerate() {
            rank_of[g as usize] = r as u16;
        }
        MonomialOrder { rank_of, gen_of }
    }

    pub fn rank(&self, g: GenId) -> u16 {
        self.rank_of[g as usize]
    }

    pub fn gen(&self, r: u16) -> GenId {
        self.gen_of[r as usize]
    }

    pub fn word(&self, gens: &[GenId]) -> Word {
        Word(gens.iter().map(|&g| self.rank(g)).collect())
    }
}

/// Inter-reduced rules `lead -> rhs`, one per leading degree-2 word.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    order: MonomialOrder,
    generators: Vec<GeneratorSymbol>,
    /// `rule[a * n + b]`: index into `rhs` for the leading word `ab` (ranks).
    rule: Vec<Option<usize>>,
    leads: Vec<(u16, u16)>,
    rhs: Vec<Poly>,
}

impl RewriteSystem {
    pub fn len(&self) -> usize {
        self.leads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leads.is_empty()
    }

    fn letters(&self) -> usize {
        self.generators.len()
    }

    pub fn is_lead(&self, a: u16, b: u16) -> bool {
        self.rule[a as usize * self.letters() + b as usize].is_some()
    }

    fn rule_for(&self, a: u16, b: u16) -> Option<&Poly> {
        self.rule[a as usize * self.letters() + b as usize].map(|i| &self.rhs[i])
    }

    /// Leading words and right-hand sides, largest lead first.
    pub fn rules(&self) -> Vec<(Word, &Poly)> {
        let mut v: Vec<(Word, &Poly)> = self
            .leads
            .iter()
            .zip(&self.rhs)
            .map(|(&(a, b), p)| (Word(vec![a, b]), p))
            .collect();
        v.sort_by(|x, y| y.0.cmp(&x.0));
        v
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        w.0.windows(2).all(|p| !self.is_lead(p[0], p[1]))
    }

    /// Fully reduced form of `p`.
    pub fn normal_form(&self, mut work: Poly) -> Poly {
        let mut out = Poly::new();
        while let Some((w, c)) = work.pop_last() {
            let pos = w.0.windows(2).position(|p| self.is_lead(p[0], p[1]));
            let Some(i) = pos else {
                out.insert(w, c);
                continue;
            };
            let rhs = self.rule_for(w.0[i], w.0[i + 1]).expect("lead has a rule");
            for (rw, rc) in rhs {
                let mut nw = Vec::with_capacity(w.0.len());
                nw.extend_from_slice(&w.0[..i]);
                nw.extend_from_slice(&rw.0);
                nw.extend_from_slice(&w.0[i + 2..]);
                let t = &c * rc;
                let key = Word(nw);
                match work.get_mut(&key) {
                    Some(x) => {
                        *x = &*x + &t;
                        if x.is_zero() {
                            work.remove(&key);
                        }
                    }
                    None => {
                        work.insert(key, t);
                    }
                }
            }
        }
        out
    }

    /// Degree-3 words `abc` with both `ab` and `bc` leading.
    pub fn overlaps(&self) -> Vec<[u16; 3]> {
        let mut v = Vec::new();
        for &(a, b) in &self.leads {
            for c in 0..self.letters() as u16 {
                if self.is_lead(b, c) {
                    v.push([a, b, c]);
                }
            }
        }
        v.sort();
        v
    }

    /// Difference of the two reductions of an overlap, in normal form.
    pub fn overlap_residue(&self, w: [u16; 3]) -> Poly {
        let [a, b, c] = w;
        let mut diff = Poly::new();
        for (rw, rc) in self.rule_for(a, b).unwrap() {
            let mut nw = rw.0.clone();
            nw.push(c);
            *diff.entry(Word(nw)).or_default() += rc.clone();
        }
        for (rw, rc) in self.rule_for(b, c).unwrap() {
            let mut nw = vec![a];
            nw.extend_from_slice(&rw.0);
            *diff.entry(Word(nw)).or_default() -= rc.clone();
        }
        diff.retain(|_, c| !c.is_zero());
        self.normal_form(diff)
    }

    pub fn check_confluence(&self) -> ConfluenceReport {
        let overlaps = self.overlaps();
        let unresolved: Vec<UnresolvedOverlap> = overlaps
            .par_iter()
            .filter_map(|&w| {
                let res = self.overlap_residue(w);
                (!res.is_empty()).then(|| UnresolvedOverlap {
                    word: self.render_word(&Word(w.to_vec())),
                    residue_degree: res.keys().map(|k| k.0.len()).max().unwrap_or(0),
                    residue_terms: res.len(),
                    residue: self.render_poly(&res),
                })
            })
            .collect();
        ConfluenceReport {
            overlaps: overlaps.len(),
            unresolved,
        }
    }

    /// Number of irreducible words of each degree `0..=max_degree`.
    pub fn count_normal_words(&self, max_degree: usize) -> Vec<u128> {
        let n = self.letters();
        let mut out = vec![1u128];
        if max_degree == 0 {
            return out;
        }
        let mut ending = vec![1u128; n];
        out.push(n as u128);
        for _ in 2..=max_degree {
            let mut next = vec![0u128; n];
            for (b, slot) in next.iter_mut().enumerate() {
                *slot = (0..n)
                    .filter(|&a| !self.is_lead(a as u16, b as u16))
                    .map(|a| ending[a])
                    .sum();
            }
            ending = next;
            out.push(ending.iter().sum());
        }
        out
    }

    pub fn render_word(&self, w: &Word) -> String {
        if w.0.is_empty() {
            return "1".into();
        }
        w.0.iter()
            .map(|&r| self.generators[self.order.gen(r) as usize].to_string())
            .collect()
    }

    /// Terms from the largest word down.
    pub fn render_poly(&self, p: &Poly) -> String {
        let mut s = String::new();
        for (i, (w, c)) in p.iter().rev().enumerate() {
            if i > 0 {
                s.push_str(" + ");
            }
            let _ = write!(s, "({c}) * {}", self.render_word(w));
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnresolvedOverlap {
    pub word: String,
    pub residue: String,
    pub residue_degree: usize,
    pub residue_terms: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfluenceReport {
    pub overlaps: usize,
    pub unresolved: Vec<UnresolvedOverlap>,
}

impl ConfluenceReport {
    pub fn is_confluent(&self) -> bool {
        self.unresolved.is_empty()
    }
}

/// Orients the relations of `pres` by row reduction, pivoting on the
/// largest word of each relation.
pub fn orient(pres: &AlgebraPresentation, order: &MonomialOrder) -> Result<RewriteSystem> {
    let mut space: RowSpace<Word> = RowSpace::new();
    for r in &pres.relations {
        let mut v: SparseVec<Word> = r
            .terms
            .iter()
            .map(|(&(x, y), c)| (order.word(&[x, y]), c.clone()))
            .collect();
        if !r.constant.is_zero() {
            v.insert(Word(Vec::new()), r.constant.clone());
        }
        space.insert(v);
    }
    let n = pres.generators.len();
    let mut sys = RewriteSystem {
        order: order.clone(),
        generators: pres.generators.clone(),
        rule: vec![None; n * n],
        leads: Vec::new(),
        rhs: Vec::new(),
    };
    for row in space.rows() {
        let (lead, _) = row.iter().next_back().expect("nonzero row");
        if lead.0.len() < 2 {
            return Err(Error::Degenerate(format!(
                "the relations imply a relation of degree {} ({})",
                lead.0.len(),
                sys.render_poly(row)
            )));
        }
        let (a, b) = (lead.0[0], lead.0[1]);
        let rhs: Poly = row
            .iter()
            .filter(|(w, _)| *w != lead)
            .map(|(w, c)| (w.clone(), -c))
            .collect();
        sys.rule[a as usize * n + b as usize] = Some(sys.rhs.len());
        sys.leads.push((a, b));
        sys.rhs.push(rhs);
    }
    Ok(sys)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesRow {
    pub degree: usize,
    pub deformed: u128,
    pub classical: u128,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub generators: usize,
    pub rules: usize,
    pub overlaps: usize,
    pub rows: Vec<SeriesRow>,
}

impl SeriesReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.matches)
    }
}

/// Orientation, confluence and normal-word counts in one pass; counts are
/// only produced for confluent systems.
#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub confluence: ConfluenceReport,
    pub series: Option<SeriesReport>,
}

pub fn analyze(pres: &AlgebraPresentation, max_degree: usize) -> Result<Analysis> {
    let order = MonomialOrder::standard(&pres.generators);
    let sys = orient(pres, &order)?;
    let confluence = sys.check_confluence();
    let series = confluence
        .is_confluent()
        .then(|| series_rows(pres, &sys, max_degree));
    Ok(Analysis { confluence, series })
}

fn series_rows(pres: &AlgebraPresentation, sys: &RewriteSystem, max_degree: usize) -> SeriesReport {
    let rows = sys
        .count_normal_words(max_degree)
        .into_iter()
        .enumerate()
        .map(|(d, deformed)| {
            let classical = pres.classical_series(d);
            SeriesRow {
                degree: d,
                deformed,
                classical,
                matches: deformed == classical,
            }
        })
        .collect();
    SeriesReport {
        generators: pres.generators.len(),
        rules: sys.len(),
        overlaps: sys.overlaps().len(),
        rows,
    }
}

/// Hilbert series up to `max_degree`, compared with the classical one.
/// Refuses non-confluent systems, whose normal words overcount.
pub fn poincare_series(pres: &AlgebraPresentation, max_degree: usize) -> Result<SeriesReport> {
    let a = analyze(pres, max_degree)?;
    match a.series {
        Some(s) => Ok(s),
        None => Err(Error::NotConfluent(a.confluence.unresolved.len())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::GroupSpec;
    use crate::relations::{gen_single_copy, Relation, Sign, Source};

    fn counts(pres: &AlgebraPresentation, d: usize) -> Vec<u128> {
        poincare_series(pres, d)
            .unwrap()
            .rows
            .iter()
            .map(|r| r.deformed)
            .collect()
    }

    #[test]
    fn sl2_counts() {
        let w = gen_single_copy(GroupSpec::sl(2), Sign::Weyl, 1).unwrap();
        assert_eq!(counts(&w, 3), vec![1, 4, 10, 20]);
        let c = gen_single_copy(GroupSpec::sl(2), Sign::Clifford, 1).unwrap();
        assert_eq!(counts(&c, 4), vec![1, 4, 6, 4, 1]);
    }

    #[test]
    fn word_order_is_deg_lex() {
        assert!(Word(vec![5]) < Word(vec![0, 0]));
        assert!(Word(vec![0, 3]) < Word(vec![1, 0]));
        assert!(Word(vec![]) < Word(vec![0]));
    }

    #[test]
    fn standard_order() {
        let pres = gen_single_copy(GroupSpec::sl(2), Sign::Weyl, 1).unwrap();
        let o = MonomialOrder::standard(&pres.generators);
        let seq: Vec<String> = (0..4).map(|r| pres.symbol(o.gen(r)).to_string()).collect();
        assert_eq!(seq, ["A+[1,1]", "A+[1,2]", "A[1,2]", "A[1,1]"]);
    }

    #[test]
    fn free_algebra_has_no_rules() {
        let pres = AlgebraPresentation::with_generators(
            Source::Candidate {
                description: "free".into(),
            },
            &[0],
            1,
        );
        let sys = orient(&pres, &MonomialOrder::standard(&pres.generators)).unwrap();
        assert_eq!(sys.count_normal_words(3), vec![1, 2, 4, 8]);
    }

    #[test]
    fn non_confluent_system_refused() {
        // xy = x, yx = y in one copy: overlap xyx reduces two ways to x^2 and xy = x.
        let mut pres = AlgebraPresentation::with_generators(
            Source::Candidate {
                description: "toy".into(),
            },
            &[0],
            1,
        );
        let (x, y) = (pres.cre(1, 1), pres.ann(1, 1));
        let mut r = Relation::new("a");
        r.add(y, x, &RatFunc::one());
        r.add(x, y, &RatFunc::int(-2));
        pres.push(r);
        let mut r = Relation::new("b");
        r.add(y, y, &RatFunc::one());
        r.add(x, x, &RatFunc::int(-1));
        pres.push(r);
        let a = analyze(&pres, 3).unwrap();
        assert!(!a.confluence.is_confluent());
        assert!(matches!(
            poincare_series(&pres, 3),
            Err(Error::NotConfluent(_))
        ));
    }

    #[test]
    fn degree_one_relation_is_degenerate() {
        let mut pres = AlgebraPresentation::with_generators(
            Source::Candidate {
                description: "toy".into(),
            },
            &[0],
            1,
        );
        let mut r = Relation::new("a");
        r.add_constant(&RatFunc::one());
        pres.push(r);
        let e = orient(&pres, &MonomialOrder::standard(&pres.generators)).unwrap_err();
        assert!(matches!(e, Error::Degenerate(_)));
    }
}
