use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Integer expression form interpreted by the abstract domains. Compilation
/// from surface syntax is total: anything the domains cannot interpret
/// becomes [`LinExpr::Havoc`] (an unknown integer), never an error.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LinExpr {
    Const(BigInt),
    Var(String),
    Add(Box<LinExpr>, Box<LinExpr>),
    Sub(Box<LinExpr>, Box<LinExpr>),
    Neg(Box<LinExpr>),
    /// Multiplication by an integer constant.
    Mul(BigInt, Box<LinExpr>),
    /// Truncated division by a nonzero constant (rounds toward zero).
    Div(Box<LinExpr>, BigInt),
    /// Truncated remainder by a nonzero constant (sign of the dividend).
    Mod(Box<LinExpr>, BigInt),
    /// An unknown integer.
    Havoc,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CmpOp {
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
    Ne,
}

/// Guard/test form interpreted by the abstract domains.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LinCond {
    True,
    False,
    Cmp(CmpOp, LinExpr, LinExpr),
    And(Box<LinCond>, Box<LinCond>),
    Or(Box<LinCond>, Box<LinCond>),
    Not(Box<LinCond>),
    /// Unknown truth value; tests with it are the identity.
    Havoc,
}

impl LinExpr {
    pub fn int(i: i64) -> LinExpr {
        LinExpr::Const(BigInt::from(i))
    }

    pub fn var(name: &str) -> LinExpr {
        LinExpr::Var(name.to_string())
    }

    /// Exact evaluation under a total integer environment. `None` marks
    /// havoc (no defined value). Division/mod by zero cannot occur by
    /// construction (constants are checked at compile time).
    pub fn eval(&self, env: &BTreeMap<String, BigInt>) -> Option<BigInt> {
        match self {
            LinExpr::Const(c) => Some(c.clone()),
            LinExpr::Var(x) => env.get(x).cloned(),
            LinExpr::Add(a, b) => Some(a.eval(env)? + b.eval(env)?),
            LinExpr::Sub(a, b) => Some(a.eval(env)? - b.eval(env)?),
            LinExpr::Neg(a) => Some(-a.eval(env)?),
            LinExpr::Mul(k, a) => Some(k * a.eval(env)?),
            LinExpr::Div(a, k) => Some(a.eval(env)? / k),
            LinExpr::Mod(a, k) => Some(a.eval(env)? % k),
            LinExpr::Havoc => None,
        }
    }

    pub fn free_vars(&self, out: &mut Vec<String>) {
        match self {
            LinExpr::Const(_) | LinExpr::Havoc => {}
            LinExpr::Var(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
            LinExpr::Add(a, b) | LinExpr::Sub(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
            LinExpr::Neg(a) | LinExpr::Mul(_, a) | LinExpr::Div(a, _) | LinExpr::Mod(a, _) => {
                a.free_vars(out)
            }
        }
    }
}

impl LinCond {
    /// Exact evaluation; `None` marks an unknown truth value.
    pub fn eval(&self, env: &BTreeMap<String, BigInt>) -> Option<bool> {
        match self {
            LinCond::True => Some(true),
            LinCond::False => Some(false),
            LinCond::Cmp(op, a, b) => {
                let (a, b) = (a.eval(env)?, b.eval(env)?);
                Some(match op {
                    CmpOp::Le => a <= b,
                    CmpOp::Lt => a < b,
                    CmpOp::Ge => a >= b,
                    CmpOp::Gt => a > b,
                    CmpOp::Eq => a == b,
                    CmpOp::Ne => a != b,
                })
            }
            LinCond::And(a, b) => match (a.eval(env), b.eval(env)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            LinCond::Or(a, b) => match (a.eval(env), b.eval(env)) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
            LinCond::Not(a) => a.eval(env).map(|v| !v),
            LinCond::Havoc => None,
        }
    }

    /// Negation with `Not` pushed to the atoms. Comparison atoms negate
    /// exactly over the integers; `Havoc` stays `Havoc`.
    pub fn negate(&self) -> LinCond {
        match self {
            LinCond::True => LinCond::False,
            LinCond::False => LinCond::True,
            LinCond::Cmp(op, a, b) => {
                let flipped = match op {
                    CmpOp::Le => CmpOp::Gt,
                    CmpOp::Lt => CmpOp::Ge,
                    CmpOp::Ge => CmpOp::Lt,
                    CmpOp::Gt => CmpOp::Le,
                    CmpOp::Eq => CmpOp::Ne,
                    CmpOp::Ne => CmpOp::Eq,
                };
                LinCond::Cmp(flipped, a.clone(), b.clone())
            }
            LinCond::And(a, b) => LinCond::Or(Box::new(a.negate()), Box::new(b.negate())),
            LinCond::Or(a, b) => LinCond::And(Box::new(a.negate()), Box::new(b.negate())),
            LinCond::Not(a) => (**a).clone(),
            LinCond::Havoc => LinCond::Havoc,
        }
    }

    pub fn and(a: LinCond, b: LinCond) -> LinCond {
        match (&a, &b) {
            (LinCond::True, _) => b,
            (_, LinCond::True) => a,
            (LinCond::False, _) | (_, LinCond::False) => LinCond::False,
            _ => LinCond::And(Box::new(a), Box::new(b)),
        }
    }

    pub fn or(a: LinCond, b: LinCond) -> LinCond {
        match (&a, &b) {
            (LinCond::False, _) => b,
            (_, LinCond::False) => a,
            (LinCond::True, _) | (_, LinCond::True) => LinCond::True,
            _ => LinCond::Or(Box::new(a), Box::new(b)),
        }
    }

    pub fn cmp(op: CmpOp, a: LinExpr, b: LinExpr) -> LinCond {
        LinCond::Cmp(op, a, b)
    }
}

/// `constant + Σ coeff·var` decomposition of a [`LinExpr`]. `exact` is false
/// when the expression contained subterms (mod, div, havoc) folded away; the
/// form is then only usable where an over-approximation is acceptable.
#[derive(Clone, Debug)]
pub struct LinearForm {
    pub coeffs: BTreeMap<String, BigInt>,
    pub constant: BigInt,
    pub exact: bool,
}

impl LinearForm {
    fn constant_form(c: BigInt) -> LinearForm {
        LinearForm {
            coeffs: BTreeMap::new(),
            constant: c,
            exact: true,
        }
    }

    fn inexact() -> LinearForm {
        LinearForm {
            coeffs: BTreeMap::new(),
            constant: BigInt::zero(),
            exact: false,
        }
    }

    fn scale(mut self, k: &BigInt) -> LinearForm {
        for c in self.coeffs.values_mut() {
            *c = &*c * k;
        }
        self.constant *= k;
        self.coeffs.retain(|_, c| !c.is_zero());
        self
    }

    fn add(mut self, other: LinearForm) -> LinearForm {
        for (v, c) in other.coeffs {
            let e = self.coeffs.entry(v).or_insert_with(BigInt::zero);
            *e += c;
        }
        self.constant += other.constant;
        self.exact &= other.exact;
        self.coeffs.retain(|_, c| !c.is_zero());
        self
    }

    /// Builds the linear form of `e`. Mod/Div/Havoc subterms make the form
    /// inexact (they contribute no coefficients).
    pub fn of(e: &LinExpr) -> LinearForm {
        match e {
            LinExpr::Const(c) => LinearForm::constant_form(c.clone()),
            LinExpr::Var(x) => {
                let mut coeffs = BTreeMap::new();
                coeffs.insert(x.clone(), BigInt::from(1));
                LinearForm {
                    coeffs,
                    constant: BigInt::zero(),
                    exact: true,
                }
            }
            LinExpr::Add(a, b) => LinearForm::of(a).add(LinearForm::of(b)),
            LinExpr::Sub(a, b) => {
                LinearForm::of(a).add(LinearForm::of(b).scale(&BigInt::from(-1)))
            }
            LinExpr::Neg(a) => LinearForm::of(a).scale(&BigInt::from(-1)),
            LinExpr::Mul(k, a) => LinearForm::of(a).scale(k),
            LinExpr::Div(_, _) | LinExpr::Mod(_, _) | LinExpr::Havoc => LinearForm::inexact(),
        }
    }

    /// True when the form is `±x + c` or `c`, the shapes octagons assign
    /// exactly.
    pub fn unit_vars(&self) -> bool {
        self.coeffs.values().all(|c| c.abs() == BigInt::from(1))
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinExpr::Const(c) => write!(f, "{c}"),
            LinExpr::Var(x) => write!(f, "{x}"),
            LinExpr::Add(a, b) => write!(f, "({a} + {b})"),
            LinExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            LinExpr::Neg(a) => write!(f, "(-{a})"),
            LinExpr::Mul(k, a) => write!(f, "({k} * {a})"),
            LinExpr::Div(a, k) => write!(f, "({a} / {k})"),
            LinExpr::Mod(a, k) => write!(f, "({a} mod {k})"),
            LinExpr::Havoc => write!(f, "?"),
        }
    }
}

impl fmt::Display for LinCond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinCond::True => write!(f, "true"),
            LinCond::False => write!(f, "false"),
            LinCond::Cmp(op, a, b) => {
                let s = match op {
                    CmpOp::Le => "<=",
                    CmpOp::Lt => "<",
                    CmpOp::Ge => ">=",
                    CmpOp::Gt => ">",
                    CmpOp::Eq => "=",
                    CmpOp::Ne => "<>",
                };
                write!(f, "{a} {s} {b}")
            }
            LinCond::And(a, b) => write!(f, "({a} && {b})"),
            LinCond::Or(a, b) => write!(f, "({a} || {b})"),
            LinCond::Not(a) => write!(f, "(not {a})"),
            LinCond::Havoc => write!(f, "?"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, i64)]) -> BTreeMap<String, BigInt> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), BigInt::from(*v)))
            .collect()
    }

    #[test]
    fn truncated_div_mod() {
        let e = LinExpr::Mod(Box::new(LinExpr::var("x")), BigInt::from(2));
        assert_eq!(e.eval(&env(&[("x", -3)])), Some(BigInt::from(-1)));
        let d = LinExpr::Div(Box::new(LinExpr::var("x")), BigInt::from(2));
        assert_eq!(d.eval(&env(&[("x", -3)])), Some(BigInt::from(-1)));
    }

    #[test]
    fn negate_is_exact_on_grid() {
        let c = LinCond::cmp(CmpOp::Lt, LinExpr::var("x"), LinExpr::int(2));
        let n = c.negate();
        for x in -4..=4 {
            let e = env(&[("x", x)]);
            assert_eq!(c.eval(&e).map(|b| !b), n.eval(&e));
        }
    }

    #[test]
    fn linear_form_collects() {
        // 2*(x - y) + y + 3  =>  2x - y + 3
        let e = LinExpr::Add(
            Box::new(LinExpr::Mul(
                BigInt::from(2),
                Box::new(LinExpr::Sub(
                    Box::new(LinExpr::var("x")),
                    Box::new(LinExpr::var("y")),
                )),
            )),
            Box::new(LinExpr::Add(
                Box::new(LinExpr::var("y")),
                Box::new(LinExpr::int(3)),
            )),
        );
        let f = LinearForm::of(&e);
        assert!(f.exact);
        assert_eq!(f.constant, BigInt::from(3));
        assert_eq!(f.coeffs.get("x"), Some(&BigInt::from(2)));
        assert_eq!(f.coeffs.get("y"), Some(&BigInt::from(-1)));
    }
}
