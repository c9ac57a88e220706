use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

use super::congruence::Cong;
use super::expr::{CmpOp, LinCond, LinExpr};
use super::interval::{atoms_le_zero, eval_expr, linearize, Itv};
use super::octagon::Dbm;
use super::scope::{Scope, VALUE_VAR};

/// Which numerical lattice backs a [`BaseAbstract`].
#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub enum DomainKind {
    Interval,
    Congruence,
    Octagon,
    /// Reduced product of octagons and per-variable congruences.
    OctCong,
}

impl DomainKind {
    pub fn parse(s: &str) -> Option<DomainKind> {
        match s {
            "interval" => Some(DomainKind::Interval),
            "congruence" => Some(DomainKind::Congruence),
            "octagon" => Some(DomainKind::Octagon),
            "octcong" => Some(DomainKind::OctCong),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DomainKind::Interval => "interval",
            DomainKind::Congruence => "congruence",
            DomainKind::Octagon => "octagon",
            DomainKind::OctCong => "octcong",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Payload {
    Interval(Vec<Itv>),
    Congruence(Vec<Cong>),
    Octagon(Dbm),
    OctCong(Dbm, Vec<Cong>),
}

/// Sorted constants used to stop widening short of ±∞.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Thresholds {
    consts: Vec<BigInt>,
}

impl Thresholds {
    pub fn empty() -> Thresholds {
        Thresholds::default()
    }

    pub fn is_empty(&self) -> bool {
        self.consts.is_empty()
    }

    /// Harvests the constants of the given conditions; each constant `c`
    /// contributes `c`, `−c` and the off-by-one values strict comparisons
    /// normalize to.
    pub fn from_conds<'a>(conds: impl IntoIterator<Item = &'a LinCond>) -> Thresholds {
        let mut out = vec![BigInt::zero()];
        fn walk_expr(e: &LinExpr, out: &mut Vec<BigInt>) {
            match e {
                LinExpr::Const(c) => out.push(c.clone()),
                LinExpr::Var(_) | LinExpr::Havoc => {}
                LinExpr::Add(a, b) | LinExpr::Sub(a, b) => {
                    walk_expr(a, out);
                    walk_expr(b, out);
                }
                LinExpr::Neg(a) => walk_expr(a, out),
                LinExpr::Mul(k, a) => {
                    out.push(k.clone());
                    walk_expr(a, out);
                }
                LinExpr::Div(a, k) | LinExpr::Mod(a, k) => {
                    out.push(k.clone());
                    walk_expr(a, out);
                }
            }
        }
        fn walk(c: &LinCond, out: &mut Vec<BigInt>) {
            match c {
                LinCond::True | LinCond::False | LinCond::Havoc => {}
                LinCond::Cmp(_, a, b) => {
                    walk_expr(a, out);
                    walk_expr(b, out);
                }
                LinCond::And(a, b) | LinCond::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                LinCond::Not(a) => walk(a, out),
            }
        }
        for c in conds {
            walk(c, &mut out);
        }
        let mut consts: Vec<BigInt> = out
            .into_iter()
            .flat_map(|c| {
                let minus = -&c;
                [&c - 1, c.clone(), &c + 1, &minus - 1, minus.clone(), minus + 1]
            })
            .collect();
        consts.sort();
        consts.dedup();
        Thresholds { consts }
    }

    pub fn constants(&self) -> &[BigInt] {
        &self.consts
    }
}

/// An element of the lattice of base refinement types: a relational
/// abstraction of a set of (value, environment) pairs over a named scope,
/// with the value held by the distinguished variable ν.
#[derive(Clone, PartialEq, Eq)]
pub struct BaseAbstract {
    scope: Scope,
    kind: DomainKind,
    /// `None` is the canonical ⊥ (γ = ∅).
    payload: Option<Payload>,
}

impl BaseAbstract {
    pub fn top(kind: DomainKind, scope: Scope) -> BaseAbstract {
        let n = scope.len();
        let payload = match kind {
            DomainKind::Interval => Payload::Interval(vec![Itv::top(); n]),
            DomainKind::Congruence => Payload::Congruence(vec![Cong::top(); n]),
            DomainKind::Octagon => Payload::Octagon(Dbm::top(n)),
            DomainKind::OctCong => Payload::OctCong(Dbm::top(n), vec![Cong::top(); n]),
        };
        BaseAbstract {
            scope,
            kind,
            payload: Some(payload),
        }
    }

    pub fn bot(kind: DomainKind, scope: Scope) -> BaseAbstract {
        BaseAbstract {
            scope,
            kind,
            payload: None,
        }
    }

    /// ⊤ with ν pinned to the constant `c`.
    pub fn const_singleton(kind: DomainKind, scope: Scope, c: &BigInt) -> BaseAbstract {
        let nu = VALUE_VAR.to_string();
        BaseAbstract::top(kind, scope).assign(&nu, &LinExpr::Const(c.clone()))
    }

    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn is_bottom(&self) -> bool {
        self.payload.is_none()
    }

    fn check_compat(&self, other: &BaseAbstract) {
        assert_eq!(self.kind, other.kind, "domain tag mismatch");
        assert_eq!(self.scope, other.scope, "scope mismatch");
    }

    fn wrap(&self, payload: Option<Payload>) -> BaseAbstract {
        BaseAbstract {
            scope: self.scope.clone(),
            kind: self.kind,
            payload,
        }
    }

    fn itv_lookup<'a>(&'a self) -> impl Fn(&str) -> Itv + 'a {
        move |name: &str| {
            let Some(i) = self.scope.index_of(name) else {
                return Itv::top();
            };
            match &self.payload {
                Some(Payload::Interval(v)) => v[i].clone(),
                Some(Payload::Octagon(d)) | Some(Payload::OctCong(d, _)) => {
                    match d.close() {
                        Some(c) => c.bounds(i),
                        None => Itv::top(),
                    }
                }
                _ => Itv::top(),
            }
        }
    }

    pub fn leq(&self, other: &BaseAbstract) -> bool {
        self.check_compat(other);
        match (&self.payload, &other.payload) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => match (a, b) {
                (Payload::Interval(x), Payload::Interval(y)) => {
                    x.iter().zip(y).all(|(a, b)| a.leq(b))
                }
                (Payload::Congruence(x), Payload::Congruence(y)) => {
                    x.iter().zip(y).all(|(a, b)| a.leq(b))
                }
                (Payload::Octagon(x), Payload::Octagon(y)) => x.leq(y),
                (Payload::OctCong(xd, xc), Payload::OctCong(yd, yc)) => {
                    xd.leq(yd) && xc.iter().zip(yc).all(|(a, b)| a.leq(b))
                }
                _ => unreachable!("kind checked"),
            },
        }
    }

    pub fn join(&self, other: &BaseAbstract) -> BaseAbstract {
        self.check_compat(other);
        match (&self.payload, &other.payload) {
            (None, _) => other.clone(),
            (_, None) => self.clone(),
            (Some(a), Some(b)) => {
                let payload = match (a, b) {
                    (Payload::Interval(x), Payload::Interval(y)) => Some(Payload::Interval(
                        x.iter().zip(y).map(|(a, b)| a.join(b)).collect(),
                    )),
                    (Payload::Congruence(x), Payload::Congruence(y)) => Some(Payload::Congruence(
                        x.iter().zip(y).map(|(a, b)| a.join(b)).collect(),
                    )),
                    (Payload::Octagon(x), Payload::Octagon(y)) => {
                        x.join(y).map(Payload::Octagon)
                    }
                    (Payload::OctCong(xd, xc), Payload::OctCong(yd, yc)) => {
                        xd.join(yd).map(|d| {
                            Payload::OctCong(
                                d,
                                xc.iter().zip(yc).map(|(a, b)| a.join(b)).collect(),
                            )
                        })
                    }
                    _ => unreachable!("kind checked"),
                };
                self.wrap(payload)
            }
        }
    }

    pub fn meet(&self, other: &BaseAbstract) -> BaseAbstract {
        self.check_compat(other);
        match (&self.payload, &other.payload) {
            (None, _) | (_, None) => self.wrap(None),
            (Some(a), Some(b)) => {
                let payload = match (a, b) {
                    (Payload::Interval(x), Payload::Interval(y)) => {
                        let mut out = Vec::with_capacity(x.len());
                        for (a, b) in x.iter().zip(y) {
                            match a.meet(b) {
                                Some(m) => out.push(m),
                                None => return self.wrap(None),
                            }
                        }
                        Some(Payload::Interval(out))
                    }
                    (Payload::Congruence(x), Payload::Congruence(y)) => {
                        let mut out = Vec::with_capacity(x.len());
                        for (a, b) in x.iter().zip(y) {
                            match a.meet(b) {
                                Some(m) => out.push(m),
                                None => return self.wrap(None),
                            }
                        }
                        Some(Payload::Congruence(out))
                    }
                    (Payload::Octagon(x), Payload::Octagon(y)) => {
                        x.meet(y).map(Payload::Octagon)
                    }
                    (Payload::OctCong(xd, xc), Payload::OctCong(yd, yc)) => {
                        let d = match xd.meet(yd) {
                            Some(d) => d,
                            None => return self.wrap(None),
                        };
                        let mut out = Vec::with_capacity(xc.len());
                        for (a, b) in xc.iter().zip(yc) {
                            match a.meet(b) {
                                Some(m) => out.push(m),
                                None => return self.wrap(None),
                            }
                        }
                        reduce_product(d, out)
                    }
                    _ => unreachable!("kind checked"),
                };
                self.wrap(payload)
            }
        }
    }

    pub fn widen(&self, other: &BaseAbstract) -> BaseAbstract {
        self.widen_thresholds(other, &Thresholds::empty())
    }

    /// Widening with a pre-join of the arguments. Unstable bounds land on
    /// the nearest threshold before ±∞.
    pub fn widen_thresholds(&self, other: &BaseAbstract, th: &Thresholds) -> BaseAbstract {
        self.check_compat(other);
        let rhs = self.join(other);
        match (&self.payload, &rhs.payload) {
            (None, _) => rhs,
            (_, None) => self.clone(),
            (Some(a), Some(b)) => {
                let payload = match (a, b) {
                    (Payload::Interval(x), Payload::Interval(y)) => Some(Payload::Interval(
                        x.iter()
                            .zip(y)
                            .map(|(a, b)| a.widen(b, th.constants()))
                            .collect(),
                    )),
                    (Payload::Congruence(x), Payload::Congruence(y)) => Some(Payload::Congruence(
                        // congruence chains are finite: join is a widening
                        x.iter().zip(y).map(|(a, b)| a.join(b)).collect(),
                    )),
                    (Payload::Octagon(x), Payload::Octagon(y)) => {
                        Some(Payload::Octagon(x.widen(y, th.constants())))
                    }
                    (Payload::OctCong(xd, xc), Payload::OctCong(yd, yc)) => {
                        // no reduction here: widened results stay as-is so
                        // ascending chains terminate
                        Some(Payload::OctCong(
                            xd.widen(yd, th.constants()),
                            xc.iter().zip(yc).map(|(a, b)| a.join(b)).collect(),
                        ))
                    }
                    _ => unreachable!("kind checked"),
                };
                self.wrap(payload)
            }
        }
    }

    /// Forward assignment `var := e`; nonlinear parts of `e` degrade to an
    /// unknown value.
    pub fn assign(&self, var: &str, e: &LinExpr) -> BaseAbstract {
        let idx = self
            .scope
            .index_of(var)
            .unwrap_or_else(|| panic!("assign target {var} not in scope"));
        let Some(payload) = &self.payload else {
            return self.clone();
        };
        let lookup = self.itv_lookup();
        let payload = match payload {
            Payload::Interval(v) => {
                let mut v = v.clone();
                v[idx] = eval_expr(e, &lookup);
                Some(Payload::Interval(v))
            }
            Payload::Congruence(v) => {
                let mut v = v.clone();
                v[idx] = cong_eval(e, &self.scope, v.as_slice());
                Some(Payload::Congruence(v))
            }
            Payload::Octagon(d) => d.assign(&self.scope, idx, e).map(Payload::Octagon),
            Payload::OctCong(d, c) => {
                let nd = d.assign(&self.scope, idx, e);
                match nd {
                    None => None,
                    Some(nd) => {
                        let mut nc = c.clone();
                        nc[idx] = cong_eval(e, &self.scope, nc.as_slice());
                        reduce_product(nd, nc)
                    }
                }
            }
        };
        self.wrap(payload)
    }

    /// Refines by a condition; unsupported subterms leave the element
    /// unchanged (sound over-approximation of the filter).
    pub fn test(&self, cond: &LinCond) -> BaseAbstract {
        if self.is_bottom() {
            return self.clone();
        }
        match cond {
            LinCond::True | LinCond::Havoc => self.clone(),
            LinCond::False => self.wrap(None),
            LinCond::And(a, b) => self.test(a).test(b),
            LinCond::Or(a, b) => self.test(a).join(&self.test(b)),
            LinCond::Not(a) => self.test(&a.negate()),
            LinCond::Cmp(CmpOp::Ne, a, b) => {
                let lt = LinCond::Cmp(CmpOp::Lt, a.clone(), b.clone());
                let gt = LinCond::Cmp(CmpOp::Gt, a.clone(), b.clone());
                self.test(&lt).join(&self.test(&gt))
            }
            LinCond::Cmp(op, lhs, rhs) => self.test_cmp(*op, lhs, rhs),
        }
    }

    fn test_cmp(&self, op: CmpOp, lhs: &LinExpr, rhs: &LinExpr) -> BaseAbstract {
        let atoms = {
            let lookup = self.itv_lookup();
            atoms_le_zero(op, lhs, rhs, &lookup)
        };
        let payload = match self.payload.as_ref().unwrap() {
            Payload::Interval(v) => {
                let mut v = v.clone();
                let mut ok = true;
                for atom in &atoms {
                    if !super::interval::refine_atom(atom, &self.scope, &mut v) {
                        ok = false;
                        break;
                    }
                }
                ok.then_some(Payload::Interval(v))
            }
            Payload::Congruence(v) => {
                cong_refine_cmp(op, lhs, rhs, &self.scope, v).map(Payload::Congruence)
            }
            Payload::Octagon(d) => {
                let mut cur = Some(d.clone());
                for atom in &atoms {
                    cur = cur.and_then(|m| m.refine_atom(&self.scope, atom));
                }
                cur.map(Payload::Octagon)
            }
            Payload::OctCong(d, c) => {
                let mut cur = Some(d.clone());
                for atom in &atoms {
                    cur = cur.and_then(|m| m.refine_atom(&self.scope, atom));
                }
                match (cur, cong_refine_cmp(op, lhs, rhs, &self.scope, c)) {
                    (Some(d), Some(c)) => reduce_product(d, c),
                    _ => None,
                }
            }
        };
        self.wrap(payload)
    }

    /// Forgets everything known about `var`; the scope is unchanged.
    pub fn project(&self, var: &str) -> BaseAbstract {
        let idx = self
            .scope
            .index_of(var)
            .unwrap_or_else(|| panic!("project target {var} not in scope"));
        let Some(payload) = &self.payload else {
            return self.clone();
        };
        let payload = match payload {
            Payload::Interval(v) => {
                let mut v = v.clone();
                v[idx] = Itv::top();
                Some(Payload::Interval(v))
            }
            Payload::Congruence(v) => {
                let mut v = v.clone();
                v[idx] = Cong::top();
                Some(Payload::Congruence(v))
            }
            Payload::Octagon(d) => d.forget(idx).map(Payload::Octagon),
            Payload::OctCong(d, c) => match d.forget(idx) {
                None => None,
                Some(d) => {
                    let mut c = c.clone();
                    c[idx] = Cong::top();
                    Some(Payload::OctCong(d, c))
                }
            },
        };
        self.wrap(payload)
    }

    /// Projects ν (shorthand used by the effect domain).
    pub fn project_value(&self) -> BaseAbstract {
        self.project(VALUE_VAR)
    }

    /// Pure renaming of a scope slot; the target name must be fresh.
    pub fn rename(&self, from: &str, to: &str) -> BaseAbstract {
        let scope = self.scope.renamed(from, to);
        BaseAbstract {
            scope,
            kind: self.kind,
            payload: self.payload.clone(),
        }
    }

    /// Extends the scope with an unconstrained variable (inserted before ν).
    pub fn add_var(&self, var: &str) -> BaseAbstract {
        let scope = self.scope.with_var(var);
        let at = scope.index_of(var).unwrap();
        let payload = self.payload.as_ref().map(|p| match p {
            Payload::Interval(v) => {
                let mut v = v.clone();
                v.insert(at, Itv::top());
                Payload::Interval(v)
            }
            Payload::Congruence(v) => {
                let mut v = v.clone();
                v.insert(at, Cong::top());
                Payload::Congruence(v)
            }
            Payload::Octagon(d) => Payload::Octagon(d.insert_var(at)),
            Payload::OctCong(d, c) => {
                let mut c = c.clone();
                c.insert(at, Cong::top());
                Payload::OctCong(d.insert_var(at), c)
            }
        });
        BaseAbstract {
            scope,
            kind: self.kind,
            payload,
        }
    }

    /// Projects `var` and removes it from the scope.
    pub fn drop_var(&self, var: &str) -> BaseAbstract {
        let idx = self
            .scope
            .index_of(var)
            .unwrap_or_else(|| panic!("drop target {var} not in scope"));
        let scope = self.scope.without_var(var);
        let payload = match &self.payload {
            None => None,
            Some(p) => match p {
                Payload::Interval(v) => {
                    let mut v = v.clone();
                    v.remove(idx);
                    Some(Payload::Interval(v))
                }
                Payload::Congruence(v) => {
                    let mut v = v.clone();
                    v.remove(idx);
                    Some(Payload::Congruence(v))
                }
                Payload::Octagon(d) => d.remove_var(idx).map(Payload::Octagon),
                Payload::OctCong(d, c) => match d.remove_var(idx) {
                    None => None,
                    Some(d) => {
                        let mut c = c.clone();
                        c.remove(idx);
                        Some(Payload::OctCong(d, c))
                    }
                },
            },
        };
        BaseAbstract {
            scope,
            kind: self.kind,
            payload,
        }
    }

    /// Meets with the equality `a = b` (octagon-exact; intervals and
    /// congruences exchange their knowledge about the two slots).
    pub fn strengthen_eq(&self, a: &str, b: &str) -> BaseAbstract {
        let ia = self
            .scope
            .index_of(a)
            .unwrap_or_else(|| panic!("{a} not in scope"));
        let ib = self
            .scope
            .index_of(b)
            .unwrap_or_else(|| panic!("{b} not in scope"));
        let Some(payload) = &self.payload else {
            return self.clone();
        };
        let payload = match payload {
            Payload::Interval(v) => {
                let mut v = v.clone();
                match v[ia].meet(&v[ib]) {
                    Some(m) => {
                        v[ia] = m.clone();
                        v[ib] = m;
                        Some(Payload::Interval(v))
                    }
                    None => None,
                }
            }
            Payload::Congruence(v) => {
                let mut v = v.clone();
                match v[ia].meet(&v[ib]) {
                    Some(m) => {
                        v[ia] = m.clone();
                        v[ib] = m;
                        Some(Payload::Congruence(v))
                    }
                    None => None,
                }
            }
            Payload::Octagon(d) => d.strengthen_eq(ia, ib).map(Payload::Octagon),
            Payload::OctCong(d, c) => match d.strengthen_eq(ia, ib) {
                None => None,
                Some(d) => {
                    let mut c = c.clone();
                    match c[ia].meet(&c[ib]) {
                        Some(m) => {
                            c[ia] = m.clone();
                            c[ib] = m;
                            reduce_product(d, c)
                        }
                        None => None,
                    }
                }
            },
        };
        self.wrap(payload)
    }

    /// Exact membership of a concrete (value, environment) pair. `env` must
    /// cover the scope minus ν.
    pub fn gamma_contains(&self, value: &BigInt, env: &BTreeMap<String, BigInt>) -> bool {
        let Some(payload) = &self.payload else {
            return false;
        };
        let point: Vec<BigInt> = self
            .scope
            .vars()
            .iter()
            .map(|v| {
                if v == VALUE_VAR {
                    value.clone()
                } else {
                    env.get(v)
                        .unwrap_or_else(|| panic!("gamma_contains env missing {v}"))
                        .clone()
                }
            })
            .collect();
        match payload {
            Payload::Interval(v) => v.iter().zip(&point).all(|(i, p)| i.contains(p)),
            Payload::Congruence(v) => v.iter().zip(&point).all(|(c, p)| c.contains(p)),
            Payload::Octagon(d) => d.contains_point(&point),
            Payload::OctCong(d, c) => {
                d.contains_point(&point) && c.iter().zip(&point).all(|(c, p)| c.contains(p))
            }
        }
    }

    /// `cond` holds on every point of γ(self): the meet with its negation
    /// is empty.
    pub fn entails(&self, cond: &LinCond) -> bool {
        self.test(&cond.negate()).is_bottom()
    }

    /// Debug rendering in the style of effect tables (`pos = acc > 0`).
    pub fn render(&self) -> String {
        let Some(payload) = &self.payload else {
            return "⊥".to_string();
        };
        let mut parts: Vec<String> = Vec::new();
        match payload {
            Payload::Interval(v) => {
                for (i, itv) in v.iter().enumerate() {
                    if !itv.is_top() {
                        parts.push(format!("{} ∈ {}", self.scope.vars()[i], itv));
                    }
                }
            }
            Payload::Congruence(v) => {
                for (i, c) in v.iter().enumerate() {
                    if !c.is_top() {
                        parts.push(format!("{} {}", self.scope.vars()[i], c));
                    }
                }
            }
            Payload::Octagon(d) => {
                let r = d.render(&self.scope);
                if r != ["⊤".to_string()] {
                    parts.extend(r);
                }
            }
            Payload::OctCong(d, v) => {
                let r = d.render(&self.scope);
                if r != ["⊤".to_string()] && r != ["⊥".to_string()] {
                    parts.extend(r);
                }
                for (i, c) in v.iter().enumerate() {
                    if !c.is_top() && c.modulus != BigInt::zero() {
                        parts.push(format!("{} {}", self.scope.vars()[i], c));
                    }
                }
            }
        }
        if parts.is_empty() {
            "⊤".to_string()
        } else {
            parts.join(" ∧ ")
        }
    }
}

impl fmt::Debug for BaseAbstract {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "β[{:?}; {}]{{{}}}", self.scope, self.kind.name(), self.render())
    }
}

/// Congruence evaluation of an expression.
fn cong_eval(e: &LinExpr, scope: &Scope, vals: &[Cong]) -> Cong {
    match e {
        LinExpr::Const(c) => Cong::constant(c.clone()),
        LinExpr::Var(x) => match scope.index_of(x) {
            Some(i) => vals[i].clone(),
            None => Cong::top(),
        },
        LinExpr::Add(a, b) => cong_eval(a, scope, vals).add(&cong_eval(b, scope, vals)),
        LinExpr::Sub(a, b) => cong_eval(a, scope, vals).sub(&cong_eval(b, scope, vals)),
        LinExpr::Neg(a) => cong_eval(a, scope, vals).neg(),
        LinExpr::Mul(k, a) => cong_eval(a, scope, vals).mul_const(k),
        LinExpr::Mod(a, k) => cong_eval(a, scope, vals).mod_const(k),
        LinExpr::Div(_, _) | LinExpr::Havoc => Cong::top(),
    }
}

/// Congruence refinement for a comparison. Only equality atoms refine:
/// `x = c`-style affine pins and `e mod m = r` residue facts. Everything
/// else is the identity. `None` is ⊥.
fn cong_refine_cmp(
    op: CmpOp,
    lhs: &LinExpr,
    rhs: &LinExpr,
    scope: &Scope,
    vals: &[Cong],
) -> Option<Vec<Cong>> {
    let mut v = vals.to_vec();
    if op != CmpOp::Eq && op != CmpOp::Ne {
        return Some(v);
    }
    // normalize (mod e) = const patterns in either orientation
    let (a, b) = (lhs, rhs);
    let as_mod = |e: &LinExpr| -> Option<(LinExpr, BigInt)> {
        if let LinExpr::Mod(inner, m) = e {
            Some(((**inner).clone(), m.clone()))
        } else {
            None
        }
    };
    let as_const = |e: &LinExpr| -> Option<BigInt> {
        if let LinExpr::Const(c) = e {
            Some(c.clone())
        } else {
            None
        }
    };
    let pattern = as_mod(a)
        .zip(as_const(b))
        .or_else(|| as_mod(b).zip(as_const(a)));
    if let Some(((inner, m), c)) = pattern {
        if let LinExpr::Var(x) = &inner {
            if let Some(i) = scope.index_of(x) {
                let m_abs = num_traits::Signed::abs(&m);
                let fact = match op {
                    CmpOp::Eq if c.is_zero() => Some(Cong::of(m_abs, BigInt::zero())),
                    // (x mod m) = c with 0 < c < |m|: the residue class is a
                    // sound over-approximation of the truncated remainder
                    CmpOp::Eq if c.is_positive() && c < m_abs => Some(Cong::of(m_abs, c)),
                    // x mod 2 <> 0 over ℤ is exactly odd
                    CmpOp::Ne if c.is_zero() && m_abs == BigInt::from(2) => {
                        Some(Cong::of(m_abs, BigInt::from(1)))
                    }
                    _ => None,
                };
                if let Some(f) = fact {
                    match v[i].meet(&f) {
                        Some(m) => v[i] = m,
                        None => return None,
                    }
                }
                return Some(v);
            }
        }
        return Some(v);
    }
    if op != CmpOp::Eq {
        return Some(v);
    }
    // affine equality: single variable with unit coefficient pins a constant
    let lookup = |_: &str| Itv::top();
    let lin = linearize(
        &LinExpr::Sub(Box::new(a.clone()), Box::new(b.clone())),
        &lookup,
    );
    if lin.is_affine() && lin.coeffs.len() == 1 {
        let (x, coeff) = lin.coeffs.iter().next().unwrap();
        if let Some(i) = scope.index_of(x) {
            // coeff·x + constant = 0
            if ((-&lin.constant).mod_floor(coeff)).is_zero() {
                let c = -&lin.constant / coeff;
                match v[i].meet(&Cong::constant(c)) {
                    Some(m) => v[i] = m,
                    None => return None,
                }
            } else {
                return None; // no integer solution
            }
        }
    }
    Some(v)
}

/// Mutual refinement of the octagon and congruence components, iterated to
/// a local fixpoint. γ is preserved exactly; `None` is ⊥.
fn reduce_product(d: Dbm, mut c: Vec<Cong>) -> Option<Payload> {
    let mut d = d.close()?;
    loop {
        let mut changed = false;
        // congruences tighten octagon bounds to the residue lattice
        let mut refined = d.clone();
        for i in 0..c.len() {
            let b = d.bounds(i);
            let cg = &c[i];
            if cg.modulus.is_zero() {
                refined.add_upper(i, &cg.residue);
                refined.add_lower(i, &cg.residue);
                continue;
            }
            if cg.is_top() {
                continue;
            }
            if let Some(lo) = &b.lo {
                let aligned = lo + (&cg.residue - lo).mod_floor(&cg.modulus);
                if aligned > *lo {
                    refined.add_lower(i, &aligned);
                }
            }
            if let Some(hi) = &b.hi {
                let aligned = hi - (hi - &cg.residue).mod_floor(&cg.modulus);
                if aligned < *hi {
                    refined.add_upper(i, &aligned);
                }
            }
        }
        refined.closed = false;
        let refined = refined.close()?;
        if refined != d {
            changed = true;
            d = refined;
        }
        // octagon constants flow into the congruences
        for i in 0..c.len() {
            let b = d.bounds(i);
            if let (Some(lo), Some(hi)) = (&b.lo, &b.hi) {
                if lo == hi && !c[i].contains(lo) {
                    return None;
                }
                if lo == hi && c[i].modulus != BigInt::zero() {
                    c[i] = Cong::constant(lo.clone());
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Some(Payload::OctCong(d, c))
}
