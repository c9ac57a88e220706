use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

use super::expr::LinExpr;
use super::interval::{eval_expr, linearize, AtomLe, Itv};
use super::scope::Scope;

/// Upper bound in a DBM: a rational or +∞.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Bound {
    Fin(BigRational),
    Inf,
}

impl Bound {
    pub fn zero() -> Bound {
        Bound::Fin(BigRational::zero())
    }

    pub fn of_int(i: &BigInt) -> Bound {
        Bound::Fin(BigRational::from_integer(i.clone()))
    }

    fn add(&self, other: &Bound) -> Bound {
        match (self, other) {
            (Bound::Fin(a), Bound::Fin(b)) => Bound::Fin(a + b),
            _ => Bound::Inf,
        }
    }

    fn half(&self) -> Bound {
        match self {
            Bound::Fin(a) => Bound::Fin(a / BigRational::from_integer(BigInt::from(2))),
            Bound::Inf => Bound::Inf,
        }
    }

    /// Largest even integer ≤ the bound (integer tightening of unary rows).
    fn floor_even(&self) -> Bound {
        match self {
            Bound::Fin(a) => {
                let h = (a / BigRational::from_integer(BigInt::from(2))).floor();
                Bound::Fin(h * BigRational::from_integer(BigInt::from(2)))
            }
            Bound::Inf => Bound::Inf,
        }
    }

    fn is_neg(&self) -> bool {
        matches!(self, Bound::Fin(a) if a.is_negative())
    }

    pub fn as_int_floor(&self) -> Option<BigInt> {
        match self {
            Bound::Fin(a) => Some(a.floor().to_integer()),
            Bound::Inf => None,
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Bound::Inf, Bound::Inf) => Ordering::Equal,
            (Bound::Inf, _) => Ordering::Greater,
            (_, Bound::Inf) => Ordering::Less,
            (Bound::Fin(a), Bound::Fin(b)) => a.cmp(b),
        }
    }
}

/// Difference bound matrix over doubled variables. For scope variable `i`,
/// index `2i` stands for `+xᵢ` and `2i+1` for `−xᵢ`; entry `m[a][b]` bounds
/// `Vₐ − V_b`. Unary bounds are stored doubled (`m[2i][2i+1]` bounds `2xᵢ`).
///
/// `closed` records whether the matrix is in tightly closed form. A widening
/// result is deliberately left unclosed (closing it can defeat termination);
/// every other operation closes its result or returns ⊥.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dbm {
    n: usize,
    mat: Vec<Bound>,
    pub closed: bool,
}

fn bar(a: usize) -> usize {
    a ^ 1
}

impl Dbm {
    pub fn top(n: usize) -> Dbm {
        let dim = 2 * n;
        let mut mat = vec![Bound::Inf; dim * dim];
        for a in 0..dim {
            mat[a * dim + a] = Bound::zero();
        }
        Dbm {
            n,
            mat,
            closed: true,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> &Bound {
        &self.mat[a * 2 * self.n + b]
    }

    fn set(&mut self, a: usize, b: usize, v: Bound) {
        self.mat[a * 2 * self.n + b] = v;
    }

    /// Lowers an entry with `min`.
    pub fn tighten(&mut self, a: usize, b: usize, v: Bound) {
        if v < *self.get(a, b) {
            self.set(a, b, v);
        }
    }

    /// Adds `xᵢ − x_j ≤ c` (i ≠ j).
    pub fn add_diff_le(&mut self, i: usize, j: usize, c: Bound) {
        self.tighten(2 * i, 2 * j, c);
    }

    /// Adds `xᵢ + x_j ≤ c` (i ≠ j).
    pub fn add_sum_le(&mut self, i: usize, j: usize, c: Bound) {
        self.tighten(2 * i, 2 * j + 1, c.clone());
        self.tighten(2 * j, 2 * i + 1, c);
    }

    /// Adds `−xᵢ − x_j ≤ c` (i ≠ j).
    pub fn add_negsum_le(&mut self, i: usize, j: usize, c: Bound) {
        self.tighten(2 * i + 1, 2 * j, c.clone());
        self.tighten(2 * j + 1, 2 * i, c);
    }

    /// Adds `xᵢ ≤ c`.
    pub fn add_upper(&mut self, i: usize, c: &BigInt) {
        self.tighten(2 * i, 2 * i + 1, Bound::of_int(&(c * 2)));
    }

    /// Adds `xᵢ ≥ c`.
    pub fn add_lower(&mut self, i: usize, c: &BigInt) {
        self.tighten(2 * i + 1, 2 * i, Bound::of_int(&(c * -2)));
    }

    /// Bounds of variable `i` read off a closed matrix.
    pub fn bounds(&self, i: usize) -> Itv {
        debug_assert!(self.closed);
        let hi = self.get(2 * i, 2 * i + 1).half().as_int_floor();
        let lo = self
            .get(2 * i + 1, 2 * i)
            .half()
            .as_int_floor()
            .map(|v| -v);
        Itv { lo, hi }
    }

    /// Tight closure for integer octagons: interleaved shortest paths and
    /// strengthening, then tightening of the doubled unary bounds. `None`
    /// means the constraints are unsatisfiable.
    pub fn close(&self) -> Option<Dbm> {
        if self.closed {
            return Some(self.clone());
        }
        let dim = 2 * self.n;
        let mut m = self.clone();
        // Keep iterating the pass until the matrix stabilizes; in practice
        // one or two rounds suffice.
        for _round in 0..(dim + 2) {
            let before = m.mat.clone();
            for k in 0..dim {
                for a in 0..dim {
                    let via = m.get(a, k).clone();
                    if via == Bound::Inf {
                        continue;
                    }
                    for b in 0..dim {
                        let cand = via.add(m.get(k, b));
                        m.tighten(a, b, cand);
                    }
                }
            }
            // strengthening: m[a][b] ≤ m[a][ā]/2 + m[b̄][b]/2
            for a in 0..dim {
                let ha = m.get(a, bar(a)).half();
                if ha == Bound::Inf {
                    continue;
                }
                for b in 0..dim {
                    let hb = m.get(bar(b), b).half();
                    m.tighten(a, b, ha.add(&hb));
                }
            }
            for a in 0..dim {
                if m.get(a, a).is_neg() {
                    return None;
                }
                m.set(a, a, Bound::zero());
            }
            // integer tightening of unary rows
            for a in 0..dim {
                let t = m.get(a, bar(a)).floor_even();
                m.set(a, bar(a), t);
            }
            for a in 0..dim {
                if m.get(a, bar(a)).add(m.get(bar(a), a)).is_neg() {
                    return None;
                }
            }
            if m.mat == before {
                break;
            }
        }
        m.closed = true;
        Some(m)
    }

    /// `γ(self) ⊆ γ(other)`; the left side is closed first.
    pub fn leq(&self, other: &Dbm) -> bool {
        match self.close() {
            None => true, // empty is below everything
            Some(a) => a.mat.iter().zip(other.mat.iter()).all(|(x, y)| x <= y),
        }
    }

    /// Entrywise max of closed arguments (the precise octagon join).
    pub fn join(&self, other: &Dbm) -> Option<Dbm> {
        let (a, b) = (self.close()?, other.close()?);
        let mut out = a.clone();
        for i in 0..out.mat.len() {
            out.mat[i] = a.mat[i].clone().max(b.mat[i].clone());
        }
        out.closed = true; // max of closed matrices is closed
        Some(out)
    }

    pub fn meet(&self, other: &Dbm) -> Option<Dbm> {
        let mut out = self.clone();
        for i in 0..out.mat.len() {
            if other.mat[i] < out.mat[i] {
                out.mat[i] = other.mat[i].clone();
            }
        }
        out.closed = false;
        out.close()
    }

    /// Entrywise widening against the *stored* (possibly unclosed) left
    /// argument; unstable entries land on the nearest threshold before +∞.
    /// `entry_thresholds` must be sorted ascending; unary entries use the
    /// doubled set. The result is not closed.
    pub fn widen(&self, other: &Dbm, entry_thresholds: &[BigInt]) -> Dbm {
        let other = match other.close() {
            Some(o) => o,
            None => return self.clone(),
        };
        let dim = 2 * self.n;
        let mut out = self.clone();
        for a in 0..dim {
            for b in 0..dim {
                let cur = self.get(a, b);
                let new = other.get(a, b);
                if new <= cur {
                    continue;
                }
                let lifted = match new {
                    Bound::Inf => Bound::Inf,
                    Bound::Fin(v) => {
                        let scale = if b == bar(a) { 2 } else { 1 };
                        entry_thresholds
                            .iter()
                            .map(|t| BigRational::from_integer(t * scale))
                            .find(|t| t >= v)
                            .map(Bound::Fin)
                            .unwrap_or(Bound::Inf)
                    }
                };
                out.set(a, b, lifted);
            }
        }
        out.closed = false;
        out
    }

    /// Removes every constraint mentioning variable `i`. Exact projection
    /// when the input is closed, and preserves closure.
    pub fn forget(&self, i: usize) -> Option<Dbm> {
        let mut m = self.close()?;
        let dim = 2 * self.n;
        for x in [2 * i, 2 * i + 1] {
            for b in 0..dim {
                if b != x {
                    m.set(x, b, Bound::Inf);
                    m.set(b, x, Bound::Inf);
                }
            }
        }
        m.set(2 * i, 2 * i + 1, Bound::Inf);
        m.set(2 * i + 1, 2 * i, Bound::Inf);
        m.closed = true;
        Some(m)
    }

    /// Inserts an unconstrained variable at scope position `i`.
    pub fn insert_var(&self, i: usize) -> Dbm {
        let old_dim = 2 * self.n;
        let new_n = self.n + 1;
        let dim = 2 * new_n;
        let mut out = Dbm::top(new_n);
        out.closed = self.closed;
        let map = |a: usize| -> usize {
            if a < 2 * i {
                a
            } else {
                a + 2
            }
        };
        for a in 0..old_dim {
            for b in 0..old_dim {
                let v = self.get(a, b).clone();
                out.mat[map(a) * dim + map(b)] = v;
            }
        }
        out
    }

    /// Removes variable `i` (projecting it out first).
    pub fn remove_var(&self, i: usize) -> Option<Dbm> {
        let m = self.forget(i)?;
        let old_dim = 2 * self.n;
        let new_n = self.n - 1;
        let mut out = Dbm::top(new_n);
        let map = |a: usize| -> usize {
            debug_assert!(a / 2 != i);
            if a < 2 * i {
                a
            } else {
                a - 2
            }
        };
        for a in 0..old_dim {
            if a / 2 == i {
                continue;
            }
            for b in 0..old_dim {
                if b / 2 == i {
                    continue;
                }
                out.mat[map(a) * 2 * new_n + map(b)] = m.get(a, b).clone();
            }
        }
        out.closed = true;
        Some(out)
    }

    /// Swaps the `+x`/`−x` rows and columns of variable `i` (`x := −x`).
    fn mirror(&mut self, i: usize) {
        let dim = 2 * self.n;
        for b in 0..dim {
            self.mat.swap(2 * i * dim + b, (2 * i + 1) * dim + b);
        }
        for a in 0..dim {
            self.mat.swap(a * dim + 2 * i, a * dim + 2 * i + 1);
        }
    }

    /// Shifts variable `i` by a constant (`x := x + c`); preserves closure.
    fn shift(&mut self, i: usize, c: &BigInt) {
        let dim = 2 * self.n;
        let (p, q) = (2 * i, 2 * i + 1);
        let cb = BigRational::from_integer(c.clone());
        for b in 0..dim {
            if b == p || b == q {
                continue;
            }
            for (a, sgn) in [(p, BigInt::from(1)), (q, BigInt::from(-1))] {
                let delta = BigRational::from_integer(&sgn * c.clone());
                if let Bound::Fin(v) = self.get(a, b).clone() {
                    self.set(a, b, Bound::Fin(v + &delta));
                }
                if let Bound::Fin(v) = self.get(b, a).clone() {
                    self.set(b, a, Bound::Fin(v - delta));
                }
            }
        }
        if let Bound::Fin(v) = self.get(p, q).clone() {
            self.set(p, q, Bound::Fin(v + &cb * BigInt::from(2)));
        }
        if let Bound::Fin(v) = self.get(q, p).clone() {
            self.set(q, p, Bound::Fin(v - cb * BigInt::from(2)));
        }
    }

    fn lookup<'a>(&'a self, scope: &'a Scope) -> impl Fn(&str) -> Itv + 'a {
        move |name: &str| match scope.index_of(name) {
            Some(i) => self.bounds(i),
            None => Itv::top(),
        }
    }

    /// Forward assignment `var := e`. Exact for `c`, `±y + c`, `±x + c`;
    /// general affine forms keep interval bounds plus unit-coefficient
    /// difference/sum relations; anything else havocs the variable but
    /// keeps its interval evaluation.
    pub fn assign(&self, scope: &Scope, var: usize, e: &LinExpr) -> Option<Dbm> {
        let pre = self.close()?;
        let lin = linearize(e, &pre.lookup(scope));

        // x := x + c
        if lin.is_affine() && lin.coeffs.len() == 1 {
            if let Some(c) = lin.coeffs.get(&scope.vars()[var]) {
                if c == &BigInt::from(1) {
                    let mut out = pre;
                    out.shift(var, &lin.constant);
                    return Some(out);
                }
                if c == &BigInt::from(-1) {
                    let mut out = pre;
                    out.mirror(var);
                    out.shift(var, &lin.constant);
                    return Some(out);
                }
            }
        }
        // x := c
        if lin.is_affine() && lin.coeffs.is_empty() {
            let mut out = pre.forget(var)?;
            out.add_upper(var, &lin.constant);
            out.add_lower(var, &lin.constant);
            out.closed = false;
            return out.close();
        }
        // x := ±y + c with y ≠ x
        if lin.is_affine() && lin.coeffs.len() == 1 {
            let (y, c) = lin.coeffs.iter().next().unwrap();
            let j = scope.index_of(y).unwrap();
            if j != var && (c.abs() == BigInt::from(1)) {
                let mut out = pre.forget(var)?;
                let k = Bound::of_int(&lin.constant);
                let nk = Bound::of_int(&-&lin.constant);
                if c.is_positive() {
                    out.add_diff_le(var, j, k);
                    out.add_diff_le(j, var, nk);
                } else {
                    out.add_sum_le(var, j, k);
                    out.add_negsum_le(var, j, nk);
                }
                out.closed = false;
                return out.close();
            }
        }
        // general: interval bounds plus unit-coefficient relations
        let rhs_itv = {
            let lk = pre.lookup(scope);
            eval_expr(e, &lk)
        };
        let mut rels: Vec<(usize, bool, Itv)> = Vec::new();
        for (y, c) in &lin.coeffs {
            let j = scope.index_of(y).unwrap();
            if j == var || c.abs() != BigInt::from(1) {
                continue;
            }
            // interval of (e ∓ y): subtract this term, keep the rest
            let mut rest = lin.residual.add(&Itv::singleton(lin.constant.clone()));
            for (y2, c2) in &lin.coeffs {
                if y2 != y {
                    let j2 = scope.index_of(y2).unwrap();
                    rest = rest.add(&pre.bounds(j2).mul_const(c2));
                }
            }
            rels.push((j, c.is_positive(), rest));
        }
        let mut out = pre.forget(var)?;
        if let Some(h) = &rhs_itv.hi {
            out.add_upper(var, h);
        }
        if let Some(l) = &rhs_itv.lo {
            out.add_lower(var, l);
        }
        for (j, pos, rest) in rels {
            if pos {
                // x − y ∈ rest
                if let Some(h) = &rest.hi {
                    out.add_diff_le(var, j, Bound::of_int(h));
                }
                if let Some(l) = &rest.lo {
                    out.add_diff_le(j, var, Bound::of_int(&-l));
                }
            } else {
                // x + y ∈ rest
                if let Some(h) = &rest.hi {
                    out.add_sum_le(var, j, Bound::of_int(h));
                }
                if let Some(l) = &rest.lo {
                    out.add_negsum_le(var, j, Bound::of_int(&-l));
                }
            }
        }
        out.closed = false;
        out.close()
    }

    /// Refines with an atom `Σ coeff·var + constant + residual ≤ 0`.
    pub fn refine_atom(&self, scope: &Scope, atom: &AtomLe) -> Option<Dbm> {
        let mut m = self.close()?;
        let unit = atom.coeffs.values().all(|c| c.abs() == BigInt::from(1));
        let nvars = atom.coeffs.len();
        if atom.is_affine() && unit && nvars >= 1 && nvars <= 2 {
            let terms: Vec<(usize, bool)> = atom
                .coeffs
                .iter()
                .map(|(v, c)| (scope.index_of(v).unwrap(), c.is_positive()))
                .collect();
            let c = Bound::of_int(&-&atom.constant);
            match terms.as_slice() {
                [(i, true)] => m.add_upper(*i, &(-&atom.constant)),
                [(i, false)] => m.add_lower(*i, &atom.constant.clone()),
                [(i, true), (j, true)] => m.add_sum_le(*i, *j, c),
                [(i, true), (j, false)] => m.add_diff_le(*i, *j, c),
                [(i, false), (j, true)] => m.add_diff_le(*j, *i, c),
                [(i, false), (j, false)] => m.add_negsum_le(*i, *j, c),
                _ => unreachable!(),
            }
            m.closed = false;
            return m.close();
        }
        // fallback: interval refinement written back as unary bounds
        let mut vals: Vec<Itv> = (0..self.n).map(|i| m.bounds(i)).collect();
        if !super::interval::refine_atom(atom, scope, &mut vals) {
            return None;
        }
        for (i, itv) in vals.iter().enumerate() {
            if let Some(h) = &itv.hi {
                m.add_upper(i, h);
            }
            if let Some(l) = &itv.lo {
                m.add_lower(i, l);
            }
        }
        m.closed = false;
        m.close()
    }

    /// Exact membership of a concrete point (one value per scope variable).
    pub fn contains_point(&self, point: &[BigInt]) -> bool {
        debug_assert_eq!(point.len(), self.n);
        let dim = 2 * self.n;
        let val = |a: usize| -> BigInt {
            let v = &point[a / 2];
            if a % 2 == 0 {
                v.clone()
            } else {
                -v
            }
        };
        for a in 0..dim {
            for b in 0..dim {
                if let Bound::Fin(c) = self.get(a, b) {
                    if BigRational::from_integer(val(a) - val(b)) > *c {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Meets with `x_a = x_b`.
    pub fn strengthen_eq(&self, a: usize, b: usize) -> Option<Dbm> {
        if a == b {
            return self.close();
        }
        let mut m = self.clone();
        m.add_diff_le(a, b, Bound::zero());
        m.add_diff_le(b, a, Bound::zero());
        m.closed = false;
        m.close()
    }

    /// Renders the octagon's constraints over the scope's names.
    pub fn render(&self, scope: &Scope) -> Vec<String> {
        let m = match self.close() {
            Some(m) => m,
            None => return vec!["⊥".to_string()],
        };
        let mut out = Vec::new();
        let name = |i: usize| scope.vars()[i].clone();
        for i in 0..self.n {
            let b = m.bounds(i);
            if !b.is_top() {
                if b.lo == b.hi {
                    out.push(format!("{} = {}", name(i), b.lo.clone().unwrap()));
                } else {
                    out.push(format!("{} ∈ {}", name(i), b));
                }
            }
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                // xi − xj bounds (print each ordered pair once for diffs)
                if i < j {
                    let hi = m.get(2 * i, 2 * j);
                    let lo = m.get(2 * j, 2 * i);
                    if let (Bound::Fin(h), Bound::Fin(l)) = (hi, lo) {
                        if h.is_zero() && l.is_zero() {
                            out.push(format!("{} = {}", name(i), name(j)));
                            continue;
                        }
                    }
                    if let Bound::Fin(h) = hi {
                        out.push(format!("{} - {} ≤ {}", name(i), name(j), h));
                    }
                    if let Bound::Fin(l) = lo {
                        out.push(format!("{} - {} ≤ {}", name(j), name(i), l));
                    }
                    if let Bound::Fin(s) = m.get(2 * i, 2 * j + 1) {
                        out.push(format!("{} + {} ≤ {}", name(i), name(j), s));
                    }
                    if let Bound::Fin(s) = m.get(2 * i + 1, 2 * j) {
                        out.push(format!("-{} - {} ≤ {}", name(i), name(j), s));
                    }
                }
            }
        }
        if out.is_empty() {
            out.push("⊤".to_string());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scope_xy() -> Scope {
        Scope::new(["x", "y"])
    }

    fn pt(vals: &[i64]) -> Vec<BigInt> {
        vals.iter().map(|v| BigInt::from(*v)).collect()
    }

    #[test]
    fn close_detects_empty() {
        let mut m = Dbm::top(1);
        m.add_upper(0, &BigInt::from(1));
        m.add_lower(0, &BigInt::from(2));
        m.closed = false;
        assert!(m.close().is_none());
    }

    #[test]
    fn closure_idempotent_and_gamma_exact() {
        let s = scope_xy();
        let mut m = Dbm::top(3);
        m.add_diff_le(0, 1, Bound::of_int(&BigInt::from(1))); // x − y ≤ 1
        m.add_upper(1, &BigInt::from(2)); // y ≤ 2
        m.add_lower(0, &BigInt::from(-2));
        m.closed = false;
        let c1 = m.close().unwrap();
        let c2 = {
            let mut t = c1.clone();
            t.closed = false;
            t.close().unwrap()
        };
        assert_eq!(c1.mat, c2.mat);
        // membership unchanged by closure, checked on a grid
        for x in -4i64..=4 {
            for y in -4i64..=4 {
                for nu in -1i64..=1 {
                    let p = pt(&[x, y, nu]);
                    assert_eq!(m.contains_point(&p), c1.contains_point(&p), "{s:?} {p:?}");
                }
            }
        }
    }

    #[test]
    fn integer_tightening() {
        // x + y ≤ 1 ∧ x − y ≤ 0 implies x ≤ 1/2, tightened to x ≤ 0 over ℤ
        let mut m = Dbm::top(2);
        m.add_sum_le(0, 1, Bound::of_int(&BigInt::from(1)));
        m.add_diff_le(0, 1, Bound::zero());
        m.closed = false;
        let c = m.close().unwrap();
        assert_eq!(c.bounds(0).hi, Some(BigInt::from(0)));
    }

    #[test]
    fn meet_antisymmetry_pins_equality() {
        // meet({ν−acc0 ≤ 0}, {acc0−ν ≤ 0}) → ν = acc0
        let mut a = Dbm::top(2);
        a.add_diff_le(1, 0, Bound::zero());
        let mut b = Dbm::top(2);
        b.add_diff_le(0, 1, Bound::zero());
        let m = a.meet(&b).unwrap();
        for x in -3i64..=3 {
            for y in -3i64..=3 {
                assert_eq!(m.contains_point(&pt(&[x, y])), x == y);
            }
        }
    }

    #[test]
    fn assign_copy_is_exact() {
        // assign(acc0, ν, {ν = pos}) → acc0 = ν = pos (sample-checked)
        let s = Scope::new(["pos", "acc0"]);
        let mut m = Dbm::top(3);
        // ν = pos: indices pos=0, acc0=1, ν=2
        m.add_diff_le(2, 0, Bound::zero());
        m.add_diff_le(0, 2, Bound::zero());
        m.closed = false;
        let m = m.close().unwrap();
        let out = m.assign(&s, 1, &LinExpr::var("ν")).unwrap();
        for pos in -3i64..=3 {
            for acc in -3i64..=3 {
                for nu in -3i64..=3 {
                    let expect = pos == nu && acc == nu;
                    assert_eq!(out.contains_point(&pt(&[pos, acc, nu])), expect);
                }
            }
        }
    }

    #[test]
    fn shift_and_mirror_assignments() {
        let s = Scope::new(["x"]);
        let mut m = Dbm::top(2);
        m.add_upper(0, &BigInt::from(5));
        m.add_lower(0, &BigInt::from(1));
        m.closed = false;
        let m = m.close().unwrap();
        let inc = m
            .assign(
                &s,
                0,
                &LinExpr::Add(Box::new(LinExpr::var("x")), Box::new(LinExpr::int(3))),
            )
            .unwrap();
        assert_eq!(inc.bounds(0).lo, Some(BigInt::from(4)));
        assert_eq!(inc.bounds(0).hi, Some(BigInt::from(8)));
        let negated = m
            .assign(
                &s,
                0,
                &LinExpr::Sub(Box::new(LinExpr::int(0)), Box::new(LinExpr::var("x"))),
            )
            .unwrap();
        assert_eq!(negated.bounds(0).lo, Some(BigInt::from(-5)));
        assert_eq!(negated.bounds(0).hi, Some(BigInt::from(-1)));
    }

    #[test]
    fn forget_is_exact_projection() {
        // project(ν, {ν = x, x ∈ [0,5]}) → {x ∈ [0,5]}, sample-checked
        let s = Scope::new(["x"]);
        let mut m = Dbm::top(2);
        m.add_diff_le(1, 0, Bound::zero());
        m.add_diff_le(0, 1, Bound::zero());
        m.add_upper(0, &BigInt::from(5));
        m.add_lower(0, &BigInt::from(0));
        m.closed = false;
        let m = m.close().unwrap();
        let f = m.forget(s.nu_index()).unwrap();
        for x in -2i64..=7 {
            for nu in -7i64..=7 {
                let expect = (0..=5).contains(&x);
                assert_eq!(f.contains_point(&pt(&[x, nu])), expect, "x={x} nu={nu}");
            }
        }
    }
}
