use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::fmt;

/// Congruence lattice element `r + mℤ`.
///
/// `m = 0` is the constant `r`; `m = 1` is ⊤. Invariant: `0 ≤ r < m` when
/// `m > 0`. Emptiness (⊥) is handled one level up.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cong {
    pub modulus: BigInt,
    pub residue: BigInt,
}

impl Cong {
    pub fn top() -> Cong {
        Cong {
            modulus: BigInt::from(1),
            residue: BigInt::zero(),
        }
    }

    pub fn constant(c: BigInt) -> Cong {
        Cong {
            modulus: BigInt::zero(),
            residue: c,
        }
    }

    pub fn of(modulus: BigInt, residue: BigInt) -> Cong {
        let m = modulus.abs();
        if m.is_zero() {
            Cong::constant(residue)
        } else {
            let r = residue.mod_floor(&m);
            Cong {
                modulus: m,
                residue: r,
            }
        }
    }

    pub fn is_top(&self) -> bool {
        self.modulus == BigInt::from(1)
    }

    pub fn contains(&self, v: &BigInt) -> bool {
        if self.modulus.is_zero() {
            *v == self.residue
        } else {
            v.mod_floor(&self.modulus) == self.residue
        }
    }

    /// `self ⊑ other`: every value of self is a value of other.
    pub fn leq(&self, other: &Cong) -> bool {
        if other.modulus.is_zero() {
            return self.modulus.is_zero() && self.residue == other.residue;
        }
        self.modulus.mod_floor(&other.modulus).is_zero()
            && self.residue.mod_floor(&other.modulus) == other.residue
    }

    /// gcd-based join: the least congruence containing both.
    pub fn join(&self, other: &Cong) -> Cong {
        let g = self
            .modulus
            .gcd(&other.modulus)
            .gcd(&(&self.residue - &other.residue).abs());
        Cong::of(g, self.residue.clone())
    }

    /// Chinese-remainder meet; `None` when incompatible (⊥).
    pub fn meet(&self, other: &Cong) -> Option<Cong> {
        if self.modulus.is_zero() {
            return other.contains(&self.residue).then(|| self.clone());
        }
        if other.modulus.is_zero() {
            return self.contains(&other.residue).then(|| other.clone());
        }
        let e = self.modulus.extended_gcd(&other.modulus);
        let g = e.gcd;
        let diff = &other.residue - &self.residue;
        if !diff.mod_floor(&g).is_zero() {
            return None;
        }
        let lcm = (&self.modulus / &g) * &other.modulus;
        // r = r1 + m1 * ((diff/g) * x mod (m2/g)), with x from Bézout
        let step = (&diff / &g) * e.x;
        let m2g = &other.modulus / &g;
        let r = &self.residue + &self.modulus * step.mod_floor(&m2g);
        Some(Cong::of(lcm, r))
    }

    pub fn add(&self, other: &Cong) -> Cong {
        let g = self.modulus.gcd(&other.modulus);
        Cong::of(g, &self.residue + &other.residue)
    }

    pub fn sub(&self, other: &Cong) -> Cong {
        let g = self.modulus.gcd(&other.modulus);
        Cong::of(g, &self.residue - &other.residue)
    }

    pub fn neg(&self) -> Cong {
        Cong::of(self.modulus.clone(), -&self.residue)
    }

    pub fn mul_const(&self, k: &BigInt) -> Cong {
        if k.is_zero() {
            return Cong::constant(BigInt::zero());
        }
        Cong::of(&self.modulus * k, &self.residue * k)
    }

    /// Truncated remainder by a nonzero constant. Exact for constants and
    /// for multiples of `k` (result 0); ⊤ otherwise (truncated remainders of
    /// negative values do not fit a single residue class).
    pub fn mod_const(&self, k: &BigInt) -> Cong {
        if self.modulus.is_zero() {
            return Cong::constant(&self.residue % k);
        }
        let m = k.abs();
        if self.modulus.mod_floor(&m).is_zero() && self.residue.is_zero() {
            return Cong::constant(BigInt::zero());
        }
        Cong::top()
    }
}

impl fmt::Display for Cong {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus.is_zero() {
            write!(f, "= {}", self.residue)
        } else if self.is_top() {
            write!(f, "⊤")
        } else {
            write!(f, "≡ {} (mod {})", self.residue, self.modulus)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(m: i64, r: i64) -> Cong {
        Cong::of(BigInt::from(m), BigInt::from(r))
    }

    /// Oracle: decide `a ⊑ b` by enumerating residues on a window.
    fn leq_by_enum(a: &Cong, b: &Cong) -> bool {
        (-24i64..24).all(|v| {
            let v = BigInt::from(v);
            !a.contains(&v) || b.contains(&v)
        })
    }

    #[test]
    fn join_mod4_case() {
        // join(x ≡ 0 mod 4, x ≡ 2 mod 4) → x ≡ 0 mod 2, checked by
        // enumerating residues 0..7 (plus the negative side).
        let j = c(4, 0).join(&c(4, 2));
        assert_eq!(j, c(2, 0));
        for v in -8i64..8 {
            let v = BigInt::from(v);
            if c(4, 0).contains(&v) || c(4, 2).contains(&v) {
                assert!(j.contains(&v));
            }
        }
    }

    #[test]
    fn meet_crt() {
        // x ≡ 1 (2) ∧ x ≡ 2 (3)  →  x ≡ 5 (6)
        let m = c(2, 1).meet(&c(3, 2)).unwrap();
        assert_eq!(m, c(6, 5));
        // incompatible
        assert!(c(2, 0).meet(&c(2, 1)).is_none());
        // with constants
        assert_eq!(c(0, 4).meet(&c(2, 0)), Some(c(0, 4)));
        assert!(c(0, 3).meet(&c(2, 0)).is_none());
    }

    #[test]
    fn lattice_laws_sampled() {
        let elems: Vec<Cong> = (0..6)
            .flat_map(|m| (0..m.max(1)).map(move |r| c(m, r)))
            .collect();
        for a in &elems {
            for b in &elems {
                let j = a.join(b);
                assert!(leq_by_enum(a, &j) && leq_by_enum(b, &j), "{a} {b}");
                assert_eq!(a.leq(&j), true);
                if let Some(m) = a.meet(b) {
                    assert!(leq_by_enum(&m, a) && leq_by_enum(&m, b));
                }
                // leq agrees with the enumeration oracle
                assert_eq!(a.leq(b), leq_by_enum(a, b), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn arithmetic_sound_on_grid() {
        let elems = [c(2, 0), c(2, 1), c(3, 2), c(0, 5), c(1, 0), c(4, 3)];
        for a in &elems {
            for b in &elems {
                for x in -9i64..9 {
                    for y in -9i64..9 {
                        let (bx, by) = (BigInt::from(x), BigInt::from(y));
                        if a.contains(&bx) && b.contains(&by) {
                            assert!(a.add(b).contains(&(&bx + &by)));
                            assert!(a.sub(b).contains(&(&bx - &by)));
                            assert!(a.neg().contains(&(-&bx)));
                            assert!(a.mul_const(&BigInt::from(3)).contains(&(&bx * 3)));
                            assert!(a.mod_const(&BigInt::from(2)).contains(&(&bx % 2)));
                        }
                    }
                }
            }
        }
    }
}
