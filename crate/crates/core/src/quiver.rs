//! Quivers with vertex multiplicities, extended seeds with exchange
//! coefficient strings, generalized mutation and y-variables.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::expr::Expr;
use crate::scalar::Scalar;

/// Vertex names across all the quivers in play.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum VertexLabel {
    /// Left-triangle vertex `(k,l)` of a dual-side quiver.
    Left(u8, u8),
    /// Right-triangle vertex `⟨i,j⟩`.
    Right(u8, u8),
    /// Hankel-side vertices `(m,+)` and `(m,-)`.
    TPlus(u8),
    TMinus(u8),
    /// Frozen corner of a standalone dual-side quiver (carries det U).
    Zero,
    /// Glued frozen corners and the unfrozen gluing vertex.
    A,
    B,
    C,
    D,
    /// Isolated frozen vertex carrying the r-th exchange coefficient.
    Coeff(u8),
    /// Free-form label for synthetic test quivers.
    Custom(u32),
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Left(k, l) => write!(f, "({},{})", k, l),
            VertexLabel::Right(i, j) => write!(f, "<{},{}>", i, j),
            VertexLabel::TPlus(m) => write!(f, "({},+)", m),
            VertexLabel::TMinus(m) => write!(f, "({},-)", m),
            VertexLabel::Zero => write!(f, "(0,0)"),
            VertexLabel::A => write!(f, "A"),
            VertexLabel::B => write!(f, "B"),
            VertexLabel::C => write!(f, "C"),
            VertexLabel::D => write!(f, "D"),
            VertexLabel::Coeff(r) => write!(f, "c{}", r),
            VertexLabel::Custom(t) => write!(f, "v{}", t),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VertexInfo {
    pub label: VertexLabel,
    pub mult: usize,
    pub frozen: bool,
    pub isolated: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QuiverError {
    FrozenVertex,
    NoSuchVertex,
    ZeroDivisor,
    MissingString,
}

impl fmt::Display for QuiverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuiverError::FrozenVertex => write!(f, "mutation at a frozen vertex"),
            QuiverError::NoSuchVertex => write!(f, "unknown vertex"),
            QuiverError::ZeroDivisor => {
                write!(f, "exchange denominator vanishes at the base point; resample")
            }
            QuiverError::MissingString => write!(f, "special vertex without a string"),
        }
    }
}

#[derive(Clone)]
pub struct Quiver {
    verts: Vec<VertexInfo>,
    /// `b[i][j]` = number of arrows i -> j (both 0-based internal ids).
    b: Vec<Vec<usize>>,
    /// Unordered pairs carrying one arrow in each direction simultaneously.
    pub opposite_pairs: BTreeSet<(usize, usize)>,
    index: BTreeMap<VertexLabel, usize>,
}

impl Quiver {
    pub fn new() -> Quiver {
        Quiver { verts: Vec::new(), b: Vec::new(), opposite_pairs: BTreeSet::new(), index: BTreeMap::new() }
    }

    pub fn add_vertex(&mut self, label: VertexLabel, mult: usize, frozen: bool, isolated: bool) -> usize {
        assert!(!self.index.contains_key(&label), "duplicate vertex {label}");
        let id = self.verts.len();
        self.verts.push(VertexInfo { label, mult, frozen, isolated });
        for row in &mut self.b {
            row.push(0);
        }
        self.b.push(alloc::vec![0; id + 1]);
        self.index.insert(label, id);
        id
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn info(&self, v: usize) -> &VertexInfo {
        &self.verts[v]
    }

    pub fn id_of(&self, label: VertexLabel) -> Option<usize> {
        self.index.get(&label).copied()
    }

    pub fn vertex(&self, label: VertexLabel) -> usize {
        self.id_of(label).expect("vertex present")
    }

    pub fn arrows(&self, from: usize, to: usize) -> usize {
        self.b[from][to]
    }

    pub fn add_arrows(&mut self, from: VertexLabel, to: VertexLabel, count: usize) {
        let f = self.vertex(from);
        let t = self.vertex(to);
        self.b[f][t] += count;
    }

    pub fn set_opposite_pair(&mut self, a: VertexLabel, b: VertexLabel) {
        let x = self.vertex(a);
        let y = self.vertex(b);
        let key = (x.min(y), x.max(y));
        self.b[x][y] = 1;
        self.b[y][x] = 1;
        self.opposite_pairs.insert(key);
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        0..self.verts.len()
    }

    pub fn mutable_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices().filter(|&v| !self.verts[v].frozen)
    }

    pub fn freeze(&mut self, v: usize) {
        self.verts[v].frozen = true;
    }

    /// Drop a set of vertices (keeping arrow structure among the rest) and
    /// optionally freeze others; used to carve sub-quivers.
    pub fn restrict(&self, keep: &dyn Fn(VertexLabel) -> bool, freeze: &dyn Fn(VertexLabel) -> bool) -> Quiver {
        let mut q = Quiver::new();
        let mut old_of_new: Vec<usize> = Vec::new();
        for (id, v) in self.verts.iter().enumerate() {
            if keep(v.label) {
                q.add_vertex(v.label, v.mult, v.frozen || freeze(v.label), v.isolated);
                old_of_new.push(id);
            }
        }
        for (ni, &oi) in old_of_new.iter().enumerate() {
            for (nj, &oj) in old_of_new.iter().enumerate() {
                q.b[ni][nj] = self.b[oi][oj];
            }
        }
        for &(x, y) in &self.opposite_pairs {
            let nx = old_of_new.iter().position(|&o| o == x);
            let ny = old_of_new.iter().position(|&o| o == y);
            if let (Some(nx), Some(ny)) = (nx, ny) {
                q.opposite_pairs.insert((nx.min(ny), nx.max(ny)));
            }
        }
        q
    }

    fn in_pair(&self, x: usize, y: usize) -> bool {
        self.opposite_pairs.contains(&(x.min(y), x.max(y)))
    }

    /// Generalized quiver mutation at a mutable vertex.
    ///
    /// A path `i -> k -> j` contributes `d_k` arrows `i -> j` when both ends
    /// are mutable, and the multiplicity of the mutable end when the other
    /// is frozen. Arrows at `k` are reversed, opposite arrows cancel, and a
    /// designated opposite pair survives cancellation when the net count
    /// between its ends is zero.
    pub fn mutate(&self, k: usize) -> Result<Quiver, QuiverError> {
        if k >= self.verts.len() {
            return Err(QuiverError::NoSuchVertex);
        }
        if self.verts[k].frozen {
            return Err(QuiverError::FrozenVertex);
        }
        let n = self.verts.len();
        let mut nb: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| self.b[i][j] as i64).collect())
            .collect();
        // Path contributions.
        for i in 0..n {
            if self.b[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                if self.b[k][j] == 0 || i == j {
                    continue;
                }
                let fi = self.verts[i].frozen;
                let fj = self.verts[j].frozen;
                let mult = if fi && fj {
                    continue;
                } else if fi {
                    self.verts[j].mult
                } else if fj {
                    self.verts[i].mult
                } else {
                    self.verts[k].mult
                };
                nb[i][j] += (self.b[i][k] * self.b[k][j] * mult) as i64;
            }
        }
        // Reverse arrows at k.
        for i in 0..n {
            if i == k {
                continue;
            }
            let into = nb[i][k];
            let out = nb[k][i];
            nb[i][k] = out;
            nb[k][i] = into;
        }
        // Cancel opposite arrows. A designated pair is a permanent slot:
        // zero net count between its ends means the two-cycle, a nonzero
        // net count means that many one-way arrows (and the two-cycle
        // reappears whenever the net count returns to zero).
        let mut q = self.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let delta = nb[i][j] - nb[j][i];
                if self.in_pair(i, j) {
                    if delta == 0 {
                        nb[i][j] = 1;
                        nb[j][i] = 1;
                    } else if delta > 0 {
                        nb[i][j] = delta;
                        nb[j][i] = 0;
                    } else {
                        nb[i][j] = 0;
                        nb[j][i] = -delta;
                    }
                } else if delta >= 0 {
                    nb[i][j] = delta;
                    nb[j][i] = 0;
                } else {
                    nb[i][j] = 0;
                    nb[j][i] = -delta;
                }
            }
        }
        // Isolated vertices stay isolated; arrows between frozen vertices
        // are immaterial and never created above.
        for i in 0..n {
            for j in 0..n {
                q.b[i][j] = nb[i][j] as usize;
            }
        }
        Ok(q)
    }

    /// Structural equality of the arrow tables on the common labels,
    /// ignoring arrows that join two frozen vertices.
    pub fn same_mutable_structure(&self, other: &Quiver) -> bool {
        if self.verts.len() != other.verts.len() {
            return false;
        }
        for v in self.vertices() {
            let l = self.verts[v].label;
            let Some(w) = other.id_of(l) else { return false };
            if self.verts[v].frozen != other.info(w).frozen {
                return false;
            }
            for u in self.vertices() {
                let lu = self.verts[u].label;
                let Some(wu) = other.id_of(lu) else { return false };
                if self.verts[v].frozen && self.verts[u].frozen {
                    continue;
                }
                if self.b[v][u] != other.b[w][wu] || self.b[u][v] != other.b[wu][w] {
                    return false;
                }
            }
        }
        true
    }

    pub fn labels(&self) -> Vec<VertexLabel> {
        self.verts.iter().map(|v| v.label).collect()
    }
}

impl fmt::Debug for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "quiver on {} vertices:", self.verts.len())?;
        for v in self.vertices() {
            let info = &self.verts[v];
            write!(
                f,
                "  {} d={}{}{}:",
                info.label,
                info.mult,
                if info.frozen { " frozen" } else { "" },
                if info.isolated { " isolated" } else { "" }
            )?;
            for u in self.vertices() {
                if self.b[v][u] > 0 {
                    write!(f, " ->{}x{}", self.verts[u].label, self.b[v][u])?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Exchange coefficient string at a special vertex: `d+1` frozen-variable
/// monomials with unit ends.
#[derive(Clone)]
pub struct ExchangeString {
    pub coeffs: Vec<Expr>,
}

/// Extended seed: variables attached to a quiver plus exchange strings,
/// together with a base point at which everything is validated.
#[derive(Clone)]
pub struct Seed {
    pub quiver: Quiver,
    pub vars: Vec<Expr>,
    pub strings: Vec<Option<ExchangeString>>,
    pub base: Vec<Scalar>,
}

impl Seed {
    pub fn new(quiver: Quiver, vars: Vec<Expr>, base: Vec<Scalar>) -> Seed {
        let n = quiver.len();
        assert_eq!(vars.len(), n);
        Seed { quiver, vars, strings: alloc::vec![None; n], base }
    }

    pub fn set_string(&mut self, label: VertexLabel, coeffs: Vec<Expr>) {
        let v = self.quiver.vertex(label);
        assert_eq!(coeffs.len(), self.quiver.info(v).mult + 1);
        self.strings[v] = Some(ExchangeString { coeffs });
    }

    pub fn var(&self, label: VertexLabel) -> &Expr {
        &self.vars[self.quiver.vertex(label)]
    }

    /// Same seed anchored at another base point.
    pub fn with_base(&self, base: Vec<Scalar>) -> Seed {
        let mut s = self.clone();
        s.base = base;
        s
    }

    /// True when every attached variable is finite and nonzero at the
    /// base point (the genericity every validation step needs).
    pub fn base_is_generic(&self) -> bool {
        self.quiver
            .vertices()
            .all(|v| matches!(self.value_at_base(v), Ok(s) if !s.is_zero()))
    }

    pub fn value_at_base(&self, v: usize) -> Result<Scalar, crate::expr::EvalError> {
        self.vars[v].eval::<Scalar>(&self.base)
    }

    /// Monomial in the mutable neighbors: product over arrows out of
    /// (`outgoing = true`) or into `k`.
    fn mutable_monomial(&self, k: usize, outgoing: bool) -> Expr {
        let q = &self.quiver;
        let mut acc = Expr::int(1);
        for v in q.vertices() {
            if q.info(v).frozen {
                continue;
            }
            let cnt = if outgoing { q.arrows(k, v) } else { q.arrows(v, k) };
            if cnt > 0 {
                acc = acc.mul(&self.vars[v].pow(cnt as i64));
            }
        }
        acc
    }

    /// Frozen-variable monomial with floored exponents
    /// `prod x_i^{floor(s*b/d)}`.
    fn frozen_monomial(&self, k: usize, outgoing: bool, s: usize) -> Expr {
        let q = &self.quiver;
        let d = q.info(k).mult;
        let mut acc = Expr::int(1);
        for v in q.vertices() {
            if !q.info(v).frozen {
                continue;
            }
            let b = if outgoing { q.arrows(k, v) } else { q.arrows(v, k) };
            if b > 0 {
                let e = (s * b) / d;
                if e > 0 {
                    acc = acc.mul(&self.vars[v].pow(e as i64));
                }
            }
        }
        acc
    }

    /// Right-hand side of the generalized exchange relation at `k`:
    /// `Σ_r p_r u_>^r v_>^[r] u_<^{d-r} v_<^[d-r]`.
    pub fn exchange_rhs(&self, k: usize) -> Result<Expr, QuiverError> {
        let q = &self.quiver;
        if q.info(k).frozen {
            return Err(QuiverError::FrozenVertex);
        }
        let d = q.info(k).mult;
        if d > 1 && self.strings[k].is_none() {
            return Err(QuiverError::MissingString);
        }
        let u_gt = self.mutable_monomial(k, true);
        let u_lt = self.mutable_monomial(k, false);
        let mut terms = Vec::with_capacity(d + 1);
        for r in 0..=d {
            let p = match &self.strings[k] {
                Some(s) => s.coeffs[r].clone(),
                None => Expr::int(1),
            };
            let t = p
                .mul(&u_gt.pow(r as i64))
                .mul(&self.frozen_monomial(k, true, r))
                .mul(&u_lt.pow((d - r) as i64))
                .mul(&self.frozen_monomial(k, false, d - r));
            terms.push(t);
        }
        Ok(Expr::sum(&terms))
    }

    /// Generalized seed mutation; the new variable must be finite and
    /// nonzero at the base point.
    pub fn mutate(&self, k: usize) -> Result<Seed, QuiverError> {
        let rhs = self.exchange_rhs(k)?;
        let new_var = rhs.div(&self.vars[k]);
        match new_var.eval::<Scalar>(&self.base) {
            Ok(v) if !v.is_zero() => {}
            _ => return Err(QuiverError::ZeroDivisor),
        }
        let quiver = self.quiver.mutate(k)?;
        let mut vars = self.vars.clone();
        vars[k] = new_var;
        let mut strings = self.strings.clone();
        if let Some(s) = &self.strings[k] {
            let mut rev = s.coeffs.clone();
            rev.reverse();
            strings[k] = Some(ExchangeString { coeffs: rev });
        }
        Ok(Seed { quiver, vars, strings, base: self.base.clone() })
    }

    /// The y-variable at a mutable vertex: the ratio of the extreme terms
    /// of the exchange relation, `u_>^d v_>^[d] / (u_<^d v_<^[d])`. For
    /// multiplicity one this is the usual arrow monomial; at a special
    /// vertex the mutable parts carry the multiplicity, which is the
    /// normalization under which `{x_β, y_α} = d_α δ_{αβ} x_β y_α`.
    pub fn y_variable(&self, k: usize) -> Result<Expr, QuiverError> {
        let q = &self.quiver;
        if q.info(k).frozen {
            return Err(QuiverError::FrozenVertex);
        }
        let d = q.info(k).mult;
        let num =
            self.mutable_monomial(k, true).pow(d as i64).mul(&self.frozen_monomial(k, true, d));
        let den =
            self.mutable_monomial(k, false).pow(d as i64).mul(&self.frozen_monomial(k, false, d));
        Ok(num.div(&den))
    }
}

/// Discrepancy of a regular pullback at vertex `k` for the distinguished
/// factor with exponents `lambda`: mutable neighbors contribute through
/// `d_k` when `k` is special, frozen neighbors contribute plainly.
pub fn pullback_discrepancy(
    q: &Quiver,
    lambda: &dyn Fn(VertexLabel) -> i64,
    k: usize,
) -> i64 {
    let d = q.info(k).mult as i64;
    let mut mutable_part = 0i64;
    let mut frozen_part = 0i64;
    for v in q.vertices() {
        let inw = q.arrows(v, k) as i64;
        let outw = q.arrows(k, v) as i64;
        if inw == 0 && outw == 0 {
            continue;
        }
        let l = lambda(q.info(v).label);
        if q.info(v).frozen {
            frozen_part += (inw - outw) * l;
        } else {
            mutable_part += (inw - outw) * l;
        }
    }
    if d > 1 {
        d * mutable_part + frozen_part
    } else {
        mutable_part + frozen_part
    }
}

/// Render a quiver in DOT syntax; frozen vertices are boxes, multiplicities
/// annotate the vertex, arrow multiplicities label the edges.
pub fn to_dot(q: &Quiver, name: &str, var_label: &dyn Fn(VertexLabel) -> Option<String>) -> String {
    let mut s = format!("digraph \"{}\" {{\n", name);
    for v in q.vertices() {
        let info = q.info(v);
        let shape = if info.frozen { "box" } else { "ellipse" };
        let mut label = format!("{}", info.label);
        if info.mult > 1 {
            label.push_str(&format!(" (d={})", info.mult));
        }
        if let Some(extra) = var_label(info.label) {
            label.push_str("\\n");
            label.push_str(&extra);
        }
        s.push_str(&format!("  \"{}\" [shape={},label=\"{}\"];\n", info.label, shape, label));
    }
    for v in q.vertices() {
        for u in q.vertices() {
            let c = q.arrows(v, u);
            if c > 0 {
                if c == 1 {
                    s.push_str(&format!("  \"{}\" -> \"{}\";\n", q.info(v).label, q.info(u).label));
                } else {
                    s.push_str(&format!(
                        "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                        q.info(v).label,
                        q.info(u).label,
                        c
                    ));
                }
            }
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2_quiver() -> Quiver {
        let mut q = Quiver::new();
        q.add_vertex(VertexLabel::Custom(1), 1, false, false);
        q.add_vertex(VertexLabel::Custom(2), 1, false, false);
        q.add_arrows(VertexLabel::Custom(1), VertexLabel::Custom(2), 1);
        q
    }

    #[test]
    fn rank2_mutation_reverses_arrow() {
        let q = a2_quiver();
        let m = q.mutate(0).unwrap();
        assert_eq!(m.arrows(0, 1), 0);
        assert_eq!(m.arrows(1, 0), 1);
    }

    #[test]
    fn quiver_mutation_is_involutive() {
        let mut q = a2_quiver();
        q.add_vertex(VertexLabel::Custom(3), 1, false, false);
        q.add_arrows(VertexLabel::Custom(2), VertexLabel::Custom(3), 2);
        for v in 0..3 {
            let twice = q.mutate(v).unwrap().mutate(v).unwrap();
            assert!(twice.same_mutable_structure(&q), "vertex {v}");
        }
    }

    #[test]
    fn mutation_at_frozen_fails() {
        let mut q = a2_quiver();
        q.freeze(1);
        assert_eq!(q.mutate(1).unwrap_err(), QuiverError::FrozenVertex);
    }

    #[test]
    fn y_variable_of_simple_chain() {
        // arrows k->i and j->k only: y_k = x_i / x_j.
        let mut q = Quiver::new();
        let k = q.add_vertex(VertexLabel::Custom(0), 1, false, false);
        q.add_vertex(VertexLabel::Custom(1), 1, false, false);
        q.add_vertex(VertexLabel::Custom(2), 1, false, false);
        q.add_arrows(VertexLabel::Custom(0), VertexLabel::Custom(1), 1);
        q.add_arrows(VertexLabel::Custom(2), VertexLabel::Custom(0), 1);
        let vars = alloc::vec![Expr::atom(0), Expr::atom(1), Expr::atom(2)];
        let base = alloc::vec![Scalar::from_int(2), Scalar::from_int(3), Scalar::from_int(5)];
        let seed = Seed::new(q, vars, base);
        let y = seed.y_variable(k).unwrap();
        assert_eq!(y.eval::<Scalar>(&seed.base).unwrap(), Scalar::ratio(3, 5));
    }

    #[test]
    fn seed_mutation_involutive_on_values() {
        let q = a2_quiver();
        let vars = alloc::vec![Expr::atom(0), Expr::atom(1)];
        let base = alloc::vec![Scalar::from_int(2), Scalar::from_int(7)];
        let seed = Seed::new(q, vars, base);
        let once = seed.mutate(0).unwrap();
        // Ordinary exchange: x' = (x_2 + 1)/x_1.
        assert_eq!(once.value_at_base(0).unwrap(), Scalar::from_int(4));
        let twice = once.mutate(0).unwrap();
        assert_eq!(twice.value_at_base(0).unwrap(), Scalar::from_int(2));
    }

    #[test]
    fn discrepancy_zero_for_zero_exponents() {
        let q = a2_quiver();
        assert_eq!(pullback_discrepancy(&q, &|_| 0, 0), 0);
    }
}
