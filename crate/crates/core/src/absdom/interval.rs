use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::fmt;

use super::expr::{CmpOp, LinExpr, LinearForm};
use super::scope::Scope;

/// Nonempty integer interval with optional infinities. Emptiness is handled
/// one level up (the whole abstract element becomes ⊥).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Itv {
    /// `None` is −∞.
    pub lo: Option<BigInt>,
    /// `None` is +∞.
    pub hi: Option<BigInt>,
}

impl Itv {
    pub fn top() -> Itv {
        Itv { lo: None, hi: None }
    }

    pub fn singleton(c: BigInt) -> Itv {
        Itv {
            lo: Some(c.clone()),
            hi: Some(c),
        }
    }

    pub fn of(lo: Option<BigInt>, hi: Option<BigInt>) -> Option<Itv> {
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if l > h {
                return None;
            }
        }
        Some(Itv { lo, hi })
    }

    pub fn is_top(&self) -> bool {
        self.lo.is_none() && self.hi.is_none()
    }

    pub fn contains(&self, v: &BigInt) -> bool {
        self.lo.as_ref().map_or(true, |l| l <= v) && self.hi.as_ref().map_or(true, |h| v <= h)
    }

    pub fn leq(&self, other: &Itv) -> bool {
        let lo_ok = match (&self.lo, &other.lo) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a >= b,
        };
        let hi_ok = match (&self.hi, &other.hi) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a <= b,
        };
        lo_ok && hi_ok
    }

    pub fn join(&self, other: &Itv) -> Itv {
        Itv {
            lo: match (&self.lo, &other.lo) {
                (Some(a), Some(b)) => Some(a.min(b).clone()),
                _ => None,
            },
            hi: match (&self.hi, &other.hi) {
                (Some(a), Some(b)) => Some(a.max(b).clone()),
                _ => None,
            },
        }
    }

    pub fn meet(&self, other: &Itv) -> Option<Itv> {
        let lo = match (&self.lo, &other.lo) {
            (Some(a), Some(b)) => Some(a.max(b).clone()),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        let hi = match (&self.hi, &other.hi) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        Itv::of(lo, hi)
    }

    /// Classic interval widening; unstable bounds land on the nearest
    /// threshold before ±∞. `thresholds` must be sorted ascending.
    pub fn widen(&self, other: &Itv, thresholds: &[BigInt]) -> Itv {
        let lo = match (&self.lo, &other.lo) {
            (Some(a), Some(b)) if b >= a => Some(a.clone()),
            (_, _) => match &other.lo {
                Some(b) => thresholds.iter().rev().find(|t| *t <= b).cloned(),
                None => None,
            },
        };
        let hi = match (&self.hi, &other.hi) {
            (Some(a), Some(b)) if b <= a => Some(a.clone()),
            (_, _) => match &other.hi {
                Some(b) => thresholds.iter().find(|t| *t >= b).cloned(),
                None => None,
            },
        };
        // widening must cover both sides
        let j = self.join(other);
        Itv {
            lo: match (lo, j.lo) {
                (Some(l), Some(jl)) if l <= jl => Some(l),
                (Some(_), Some(jl)) => Some(jl),
                _ => None,
            },
            hi: match (hi, j.hi) {
                (Some(h), Some(jh)) if h >= jh => Some(h),
                (Some(_), Some(jh)) => Some(jh),
                _ => None,
            },
        }
    }

    pub fn add(&self, other: &Itv) -> Itv {
        Itv {
            lo: match (&self.lo, &other.lo) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
            hi: match (&self.hi, &other.hi) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        }
    }

    pub fn neg(&self) -> Itv {
        Itv {
            lo: self.hi.as_ref().map(|h| -h),
            hi: self.lo.as_ref().map(|l| -l),
        }
    }

    pub fn sub(&self, other: &Itv) -> Itv {
        self.add(&other.neg())
    }

    pub fn mul_const(&self, k: &BigInt) -> Itv {
        if k.is_zero() {
            return Itv::singleton(BigInt::zero());
        }
        let scaled = Itv {
            lo: self.lo.as_ref().map(|l| l * k),
            hi: self.hi.as_ref().map(|h| h * k),
        };
        if k.is_negative() {
            Itv {
                lo: scaled.hi,
                hi: scaled.lo,
            }
        } else {
            scaled
        }
    }

    /// Truncated division by a nonzero constant (monotone per sign of `k`).
    pub fn div_const(&self, k: &BigInt) -> Itv {
        let d = Itv {
            lo: self.lo.as_ref().map(|l| l / k),
            hi: self.hi.as_ref().map(|h| h / k),
        };
        if k.is_negative() {
            Itv {
                lo: d.hi,
                hi: d.lo,
            }
        } else {
            d
        }
    }

    /// Truncated remainder by a nonzero constant.
    pub fn mod_const(&self, k: &BigInt) -> Itv {
        let m = k.abs();
        if let (Some(l), Some(h)) = (&self.lo, &self.hi) {
            if l == h {
                return Itv::singleton(l % k);
            }
        }
        let bound = &m - 1;
        let lo_nonneg = self.lo.as_ref().map_or(false, |l| !l.is_negative());
        let hi_nonpos = self.hi.as_ref().map_or(false, |h| !h.is_positive());
        if lo_nonneg {
            Itv {
                lo: Some(BigInt::zero()),
                hi: Some(bound),
            }
        } else if hi_nonpos {
            Itv {
                lo: Some(-bound),
                hi: Some(BigInt::zero()),
            }
        } else {
            Itv {
                lo: Some(-&bound),
                hi: Some(bound),
            }
        }
    }
}

impl fmt::Display for Itv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.lo, &self.hi) {
            (Some(l), Some(h)) if l == h => write!(f, "{l}"),
            _ => {
                match &self.lo {
                    Some(l) => write!(f, "[{l}, ")?,
                    None => write!(f, "(-∞, ")?,
                }
                match &self.hi {
                    Some(h) => write!(f, "{h}]"),
                    None => write!(f, "+∞)"),
                }
            }
        }
    }
}

/// Interval evaluation of an expression under a per-variable bound lookup.
pub fn eval_expr(e: &LinExpr, lookup: &dyn Fn(&str) -> Itv) -> Itv {
    match e {
        LinExpr::Const(c) => Itv::singleton(c.clone()),
        LinExpr::Var(x) => lookup(x),
        LinExpr::Add(a, b) => eval_expr(a, lookup).add(&eval_expr(b, lookup)),
        LinExpr::Sub(a, b) => eval_expr(a, lookup).sub(&eval_expr(b, lookup)),
        LinExpr::Neg(a) => eval_expr(a, lookup).neg(),
        LinExpr::Mul(k, a) => eval_expr(a, lookup).mul_const(k),
        LinExpr::Div(a, k) => eval_expr(a, lookup).div_const(k),
        LinExpr::Mod(a, k) => eval_expr(a, lookup).mod_const(k),
        LinExpr::Havoc => Itv::top(),
    }
}

/// An expression split into an affine part plus an interval residual for
/// the non-affine subterms (mod, div, havoc), which are evaluated with
/// interval arithmetic under `lookup`.
#[derive(Clone, Debug)]
pub struct Linearized {
    pub coeffs: std::collections::BTreeMap<String, BigInt>,
    pub constant: BigInt,
    pub residual: Itv,
}

impl Linearized {
    pub fn is_affine(&self) -> bool {
        self.residual == Itv::singleton(BigInt::zero())
    }

    fn add_coeff(&mut self, var: &str, k: BigInt) {
        let e = self
            .coeffs
            .entry(var.to_string())
            .or_insert_with(BigInt::zero);
        *e += k;
        if e.is_zero() {
            self.coeffs.remove(var);
        }
    }
}

pub fn linearize(e: &LinExpr, lookup: &dyn Fn(&str) -> Itv) -> Linearized {
    fn go(e: &LinExpr, sign: &BigInt, out: &mut Linearized, lookup: &dyn Fn(&str) -> Itv) {
        match e {
            LinExpr::Const(c) => out.constant += sign * c,
            LinExpr::Var(x) => out.add_coeff(x, sign.clone()),
            LinExpr::Add(a, b) => {
                go(a, sign, out, lookup);
                go(b, sign, out, lookup);
            }
            LinExpr::Sub(a, b) => {
                go(a, sign, out, lookup);
                go(b, &-sign, out, lookup);
            }
            LinExpr::Neg(a) => go(a, &-sign, out, lookup),
            LinExpr::Mul(k, a) => go(a, &(sign * k), out, lookup),
            LinExpr::Div(_, _) | LinExpr::Mod(_, _) | LinExpr::Havoc => {
                let itv = eval_expr(e, lookup).mul_const(sign);
                out.residual = out.residual.add(&itv);
            }
        }
    }
    let mut out = Linearized {
        coeffs: std::collections::BTreeMap::new(),
        constant: BigInt::zero(),
        residual: Itv::singleton(BigInt::zero()),
    };
    go(e, &BigInt::from(1), &mut out, lookup);
    out
}

/// A normalized atom `Σ coeff·var + constant + residual ≤ 0`.
pub type AtomLe = Linearized;

/// Turns a comparison into `≤ 0` atoms over ℤ. `Ne` is split by the caller
/// into `Lt ∨ Gt` before reaching this point.
pub fn atoms_le_zero(
    op: CmpOp,
    lhs: &LinExpr,
    rhs: &LinExpr,
    lookup: &dyn Fn(&str) -> Itv,
) -> Vec<AtomLe> {
    let diff = |a: &LinExpr, b: &LinExpr, strict: bool| -> AtomLe {
        let mut l = linearize(&LinExpr::Sub(Box::new(a.clone()), Box::new(b.clone())), lookup);
        if strict {
            l.constant += 1;
        }
        l
    };
    match op {
        CmpOp::Le => vec![diff(lhs, rhs, false)],
        CmpOp::Lt => vec![diff(lhs, rhs, true)],
        CmpOp::Ge => vec![diff(rhs, lhs, false)],
        CmpOp::Gt => vec![diff(rhs, lhs, true)],
        CmpOp::Eq => vec![diff(lhs, rhs, false), diff(rhs, lhs, false)],
        CmpOp::Ne => unreachable!("Ne split by caller"),
    }
}

/// Refines `vals` under an atom. Returns `false` when the constraint is
/// definitely unsatisfiable (caller goes to ⊥).
pub fn refine_atom(atom: &AtomLe, scope: &Scope, vals: &mut [Itv]) -> bool {
    let term_itv = |var: &str, coeff: &BigInt, vals: &[Itv]| -> Itv {
        match scope.index_of(var) {
            Some(i) => vals[i].mul_const(coeff),
            None => Itv::top(),
        }
    };
    let mut total = atom.residual.add(&Itv::singleton(atom.constant.clone()));
    for (v, c) in &atom.coeffs {
        total = total.add(&term_itv(v, c, vals));
    }
    if total.lo.as_ref().map_or(false, |l| l.is_positive()) {
        return false;
    }
    for (v, c) in &atom.coeffs {
        let Some(idx) = scope.index_of(v) else { continue };
        // c·x ≤ -(constant + residual + Σ other terms)
        let mut rest = atom.residual.add(&Itv::singleton(atom.constant.clone()));
        for (v2, c2) in &atom.coeffs {
            if v2 != v {
                rest = rest.add(&term_itv(v2, c2, vals));
            }
        }
        let Some(rest_lo) = rest.lo else { continue };
        let bound = -rest_lo; // c·x ≤ bound
        let refined = if c.is_positive() {
            Itv {
                lo: None,
                hi: Some(bound.div_floor(c)),
            }
        } else {
            Itv {
                lo: Some(-((-&bound).div_floor(&-c.clone()))),
                hi: None,
            }
        };
        match vals[idx].meet(&refined) {
            Some(m) => vals[idx] = m,
            None => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(l: i64, h: i64) -> Itv {
        Itv::of(Some(BigInt::from(l)), Some(BigInt::from(h))).unwrap()
    }

    #[test]
    fn join_hull() {
        // join(ν∈[1,1], ν∈[−1,−1]) → ν∈[−1,1]
        assert_eq!(fin(1, 1).join(&fin(-1, -1)), fin(-1, 1));
    }

    #[test]
    fn widen_to_infinity_and_threshold() {
        let w = fin(0, 1).widen(&fin(0, 2), &[]);
        assert_eq!(w, Itv { lo: Some(BigInt::zero()), hi: None });
        let t = fin(0, 1).widen(&fin(0, 2), &[BigInt::from(10)]);
        assert_eq!(t, fin(0, 10));
        // stability: widen(x, x) = x
        assert_eq!(fin(0, 5).widen(&fin(0, 5), &[]), fin(0, 5));
    }

    #[test]
    fn mod_const_matches_concrete_on_grid() {
        // oracle: enumerate the concrete truncated remainder
        for lo in -6i64..=6 {
            for hi in lo..=6 {
                let itv = fin(lo, hi);
                let out = itv.mod_const(&BigInt::from(3));
                for x in lo..=hi {
                    assert!(out.contains(&BigInt::from(x % 3)), "{x} % 3 vs {out}");
                }
            }
        }
    }

    #[test]
    fn div_const_matches_concrete_on_grid() {
        for lo in -6i64..=6 {
            for hi in lo..=6 {
                let itv = fin(lo, hi);
                for k in [-3i64, -2, 2, 3] {
                    let out = itv.div_const(&BigInt::from(k));
                    for x in lo..=hi {
                        assert!(out.contains(&BigInt::from(x / k)), "{x}/{k} vs {out}");
                    }
                }
            }
        }
    }
}
