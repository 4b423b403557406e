//! Square sparse matrices over `Q(q)` acting on tensor powers.
//!
//! Pair indices are encoded row-major throughout the crate: `(i, j)` with
//! `i, j` in `0..n` maps to `i * n + j`, the first factor being the slow
//! index. Kronecker products and leg embeddings follow the same rule.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scalar::{Laurent, RatFunc};

#[derive(Clone, PartialEq, Eq)]
pub struct SparseMat {
    dim: usize,
    rows: Vec<BTreeMap<usize, RatFunc>>,
}

impl std::fmt::Debug for SparseMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.dump())
    }
}

/// Position of an adjacent leg pair inside a tensor power.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LegIndex {
    pub total_legs: usize,
    pub leg_dim: usize,
    /// 1-based: the pair `(position, position + 1)`.
    pub position: usize,
}

impl LegIndex {
    pub fn new(total_legs: usize, leg_dim: usize, position: usize) -> Result<Self> {
        if leg_dim == 0 || position == 0 || position >= total_legs {
            return Err(Error::Dimension(format!(
                "leg pair {position} invalid for {total_legs} legs of dimension {leg_dim}"
            )));
        }
        Ok(LegIndex {
            total_legs,
            leg_dim,
            position,
        })
    }
}

impl SparseMat {
    pub fn zero(dim: usize) -> Self {
        SparseMat {
            dim,
            rows: vec![BTreeMap::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = SparseMat::zero(dim);
        for i in 0..dim {
            m.rows[i].insert(i, RatFunc::one());
        }
        m
    }

    pub fn scalar(dim: usize, c: &RatFunc) -> Self {
        SparseMat::identity(dim).scale(c)
    }

    pub fn from_entries<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, RatFunc)>,
    {
        let mut m = SparseMat::zero(dim);
        for (r, c, v) in entries {
            if r >= dim || c >= dim {
                return Err(Error::Dimension(format!(
                    "entry ({r}, {c}) outside {dim}x{dim}"
                )));
            }
            m.add_at(r, c, &v);
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn get(&self, r: usize, c: usize) -> RatFunc {
        self.rows[r].get(&c).cloned().unwrap_or_default()
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, RatFunc> {
        &self.rows[r]
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &RatFunc)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(&c, v)| (r, c, v)))
    }

    pub fn set(&mut self, r: usize, c: usize, v: RatFunc) {
        if v.is_zero() {
            self.rows[r].remove(&c);
        } else {
            self.rows[r].insert(c, v);
        }
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &RatFunc) {
        if v.is_zero() {
            return;
        }
        let e = self.rows[r].entry(c).or_default();
        *e = &*e + v;
        if e.is_zero() {
            self.rows[r].remove(&c);
        }
    }

    fn check_same(&self, other: &SparseMat, op: &str) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!(
                "{op}: {} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &SparseMat) -> Result<SparseMat> {
        self.check_same(other, "matmul")?;
        let mut out = SparseMat::zero(self.dim);
        for (r, row) in self.rows.iter().enumerate() {
            let acc = &mut out.rows[r];
            for (k, a) in row {
                for (c, b) in &other.rows[*k] {
                    let t = a * b;
                    let e = acc.entry(*c).or_default();
                    *e = &*e + &t;
                }
            }
            acc.retain(|_, v| !v.is_zero());
        }
        Ok(out)
    }

    pub fn matadd(&self, other: &SparseMat) -> Result<SparseMat> {
        self.check_same(other, "matadd")?;
        let mut out = self.clone();
        for (r, c, v) in other.entries() {
            out.add_at(r, c, v);
        }
        Ok(out)
    }

    pub fn matsub(&self, other: &SparseMat) -> Result<SparseMat> {
        self.matadd(&other.scale(&RatFunc::int(-1)))
    }

    pub fn scale(&self, c: &RatFunc) -> SparseMat {
        if c.is_zero() {
            return SparseMat::zero(self.dim);
        }
        SparseMat {
            dim: self.dim,
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|(&k, v)| (k, v * c)).collect())
                .collect(),
        }
    }

    pub fn transpose(&self) -> SparseMat {
        let mut out = SparseMat::zero(self.dim);
        for (r, c, v) in self.entries() {
            out.rows[c].insert(r, v.clone());
        }
        out
    }

    pub fn trace(&self) -> RatFunc {
        (0..self.dim).fold(RatFunc::zero(), |acc, i| &acc + &self.get(i, i))
    }

    /// Applies `f` to every entry, dropping entries that become zero.
    pub fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> SparseMat {
        SparseMat {
            dim: self.dim,
            rows: self
                .rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|(&k, v)| (k, f(v)))
                        .filter(|(_, v)| !v.is_zero())
                        .collect()
                })
                .collect(),
        }
    }

    /// Kronecker product; row `(a, b)` of the result is `a * dim(B) + b`.
    pub fn kron(&self, other: &SparseMat) -> SparseMat {
        let n = other.dim;
        let mut out = SparseMat::zero(self.dim * n);
        for (r1, c1, v1) in self.entries() {
            for (r2, c2, v2) in other.entries() {
                out.rows[r1 * n + r2].insert(c1 * n + c2, v1 * v2);
            }
        }
        out
    }

    /// Places `self` (acting on `leg_dim^2`) on legs `(position, position+1)`
    /// of `leg_dim^total_legs`, identity elsewhere.
    pub fn embed_leg(&self, spec: LegIndex) -> Result<SparseMat> {
        let d = spec.leg_dim;
        if self.dim != d * d {
            return Err(Error::Dimension(format!(
                "embed_leg: matrix of dim {} does not act on two legs of dim {d}",
                self.dim
            )));
        }
        let left = d.pow(spec.position as u32 - 1);
        let right = d.pow((spec.total_legs - spec.position - 1) as u32);
        Ok(SparseMat::identity(left)
            .kron(self)
            .kron(&SparseMat::identity(right)))
    }

    /// Reorders tensor legs: leg `k` of the result is leg `order[k]` of `self`,
    /// applied to rows and columns alike. `dims[k]` is the size of old leg `k`.
    pub fn permute_legs(&self, dims: &[usize], order: &[usize]) -> Result<SparseMat> {
        let total: usize = dims.iter().product();
        if total != self.dim || order.len() != dims.len() {
            return Err(Error::Dimension(
                "permute_legs: leg sizes do not match".into(),
            ));
        }
        let mut seen = vec![false; dims.len()];
        for &o in order {
            if o >= dims.len() || std::mem::replace(&mut seen[o], true) {
                return Err(Error::Dimension("permute_legs: not a permutation".into()));
            }
        }
        let new_dims: Vec<usize> = order.iter().map(|&o| dims[o]).collect();
        let map = |idx: usize| -> usize {
            let mut digits = vec![0; dims.len()];
            let mut rest = idx;
            for k in (0..dims.len()).rev() {
                digits[k] = rest % dims[k];
                rest /= dims[k];
            }
            order
                .iter()
                .zip(&new_dims)
                .fold(0, |acc, (&o, &nd)| acc * nd + digits[o])
        };
        let mut out = SparseMat::zero(self.dim);
        for (r, c, v) in self.entries() {
            out.rows[map(r)].insert(map(c), v.clone());
        }
        Ok(out)
    }

    /// Generic rank over `Q(q)` by fraction-free elimination in `Z[q, q^-1]`.
    ///
    /// Each row is cleared of denominators and kept primitive (divided by the
    /// gcd of its entries) after every update, which keeps entries small on
    /// the block-structured matrices produced by braid constructions.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<BTreeMap<usize, Laurent>> = self
            .rows
            .iter()
            .filter(|r| !r.is_empty())
            .map(clear_denominators)
            .collect();
        let mut rank = 0;
        while !rows.is_empty() {
            // Pivot on the sparsest row, at its smallest column.
            let (pi, _) = rows
                .iter()
                .enumerate()
                .min_by_key(|(_, r)| r.len())
                .unwrap();
            let pivot_row = rows.swap_remove(pi);
            let (&pc, pv) = pivot_row.iter().next().unwrap();
            rank += 1;
            for row in rows.iter_mut() {
                let Some(a) = row.get(&pc).cloned() else {
                    continue;
                };
                // row <- pv * row - a * pivot_row
                let mut next: BTreeMap<usize, Laurent> = BTreeMap::new();
                for (c, v) in row.iter() {
                    next.insert(*c, pv * v);
                }
                for (c, v) in &pivot_row {
                    let t = &a * v;
                    let e = next.entry(*c).or_default();
                    *e = &*e - &t;
                }
                next.retain(|_, v| !v.is_zero());
                *row = make_primitive(next);
            }
            rows.retain(|r| !r.is_empty());
        }
        rank
    }

    /// Exact inverse by Gauss-Jordan elimination over `Q(q)`.
    pub fn inverse(&self) -> Result<SparseMat> {
        let n = self.dim;
        let mut a = self.rows.clone();
        let mut inv = SparseMat::identity(n).rows;
        let mut done = vec![false; n];
        let mut pivot_of_col = vec![usize::MAX; n];
        for col in 0..n {
            let Some(p) = (0..n)
                .filter(|&r| !done[r] && a[r].contains_key(&col))
                .min_by_key(|&r| a[r].len())
            else {
                return Err(Error::Singular);
            };
            done[p] = true;
            pivot_of_col[col] = p;
            let pinv = a[p][&col].inv()?;
            scale_row(&mut a[p], &pinv);
            scale_row(&mut inv[p], &pinv);
            let (prow, pinvrow) = (a[p].clone(), inv[p].clone());
            for r in 0..n {
                if r == p {
                    continue;
                }
                if let Some(f) = a[r].get(&col).cloned() {
                    let f = -f;
                    crate::linalg::axpy(&mut a[r], &f, &prow);
                    crate::linalg::axpy(&mut inv[r], &f, &pinvrow);
                }
            }
        }
        let mut out = SparseMat::zero(n);
        for col in 0..n {
            out.rows[col] = std::mem::take(&mut inv[pivot_of_col[col]]);
        }
        Ok(out)
    }

    /// `p(self)` for a polynomial given by coefficients in increasing degree.
    pub fn poly_eval(&self, coeffs: &[RatFunc]) -> SparseMat {
        let mut acc = SparseMat::zero(self.dim);
        for c in coeffs.iter().rev() {
            acc = acc.matmul(self).expect("same dim");
            for i in 0..self.dim {
                acc.add_at(i, i, c);
            }
        }
        acc
    }

    /// Sparse dump: `dim=<n>` then `<row> <col> <value>` per entry, 0-based,
    /// row-major.
    pub fn dump(&self) -> String {
        let mut s = format!("dim={}\n", self.dim);
        for (r, c, v) in self.entries() {
            let _ = writeln!(s, "{r} {c} {v}");
        }
        s
    }

    pub fn parse_dump(text: &str) -> Result<SparseMat> {
        let perr = |line: usize, msg: &str| Error::Parse {
            pos: line,
            msg: format!("line {}: {msg}", line + 1),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| perr(0, "empty dump"))?;
        let dim: usize = header
            .trim()
            .strip_prefix("dim=")
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| perr(0, "expected dim=<n>"))?;
        let mut m = SparseMat::zero(dim);
        for (ln, line) in lines {
            let mut parts = line.trim().splitn(3, ' ');
            let r: usize = parts
                .next()
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| perr(ln, "bad row"))?;
            let c: usize = parts
                .next()
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| perr(ln, "bad column"))?;
            let v = RatFunc::parse(parts.next().ok_or_else(|| perr(ln, "missing value"))?)?;
            if r >= dim || c >= dim {
                return Err(perr(ln, "index out of range"));
            }
            m.set(r, c, v);
        }
        Ok(m)
    }
}

fn scale_row(row: &mut BTreeMap<usize, RatFunc>, c: &RatFunc) {
    for v in row.values_mut() {
        *v = &*v * c;
    }
}

fn clear_denominators(row: &BTreeMap<usize, RatFunc>) -> BTreeMap<usize, Laurent> {
    // lcm of denominators via successive gcds
    let mut l = Laurent::one();
    for v in row.values() {
        let d = v.denom();
        let g = l.gcd(d);
        l = (&l * d).div_exact(&g).expect("gcd divides");
    }
    let out = row
        .iter()
        .map(|(&c, v)| {
            let factor = l.div_exact(v.denom()).expect("lcm is a multiple");
            (c, v.numer() * &factor)
        })
        .collect();
    make_primitive(out)
}

fn make_primitive(row: BTreeMap<usize, Laurent>) -> BTreeMap<usize, Laurent> {
    let mut g = Laurent::zero();
    for v in row.values() {
        g = g.gcd(v);
        if g.is_one() {
            return row;
        }
    }
    if g.is_zero() || g.is_one() {
        return row;
    }
    row.into_iter()
        .map(|(c, v)| (c, v.div_exact(&g).expect("gcd divides")))
        .collect()
}
