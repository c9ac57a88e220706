use std::fmt;

/// Name of the distinguished value variable. It is always the last entry of a
/// [`Scope`] and denotes the value component of the (value, environment)
/// pairs a `BaseAbstract` describes.
pub const VALUE_VAR: &str = "ν";

/// An ordered set of variable names. The value variable ν is always last;
/// all names are unique.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scope {
    vars: Vec<String>,
}

impl Scope {
    /// Builds a scope from the given environment variables, appending ν.
    /// Panics on duplicates and on reserved use of ν.
    pub fn new<I, S>(vars: I) -> Scope
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for v in vars {
            let v = v.into();
            assert!(v != VALUE_VAR, "ν is implicit in every scope");
            assert!(!out.contains(&v), "duplicate variable {v} in scope");
            out.push(v);
        }
        out.push(VALUE_VAR.to_string());
        Scope { vars: out }
    }

    /// The scope containing only ν.
    pub fn nu_only() -> Scope {
        Scope::new(Vec::<String>::new())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Environment variables, i.e. everything except ν.
    pub fn env_vars(&self) -> &[String] {
        &self.vars[..self.vars.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        false // ν is always present
    }

    pub fn nu_index(&self) -> usize {
        self.vars.len() - 1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// New scope with `name` inserted just before ν.
    pub fn with_var(&self, name: &str) -> Scope {
        assert!(!self.contains(name), "variable {name} already in scope");
        let mut vars = self.vars.clone();
        let at = vars.len() - 1;
        vars.insert(at, name.to_string());
        Scope { vars }
    }

    /// New scope with `name` removed. Panics if absent or if `name` is ν.
    pub fn without_var(&self, name: &str) -> Scope {
        assert!(name != VALUE_VAR, "cannot drop ν");
        let idx = self
            .index_of(name)
            .unwrap_or_else(|| panic!("variable {name} not in scope"));
        let mut vars = self.vars.clone();
        vars.remove(idx);
        Scope { vars }
    }

    /// New scope with `from` renamed to `to`. Rejects collisions.
    pub fn renamed(&self, from: &str, to: &str) -> Scope {
        assert!(from != VALUE_VAR && to != VALUE_VAR, "cannot rename ν");
        assert!(!self.contains(to), "rename target {to} already in scope");
        let idx = self
            .index_of(from)
            .unwrap_or_else(|| panic!("variable {from} not in scope"));
        let mut vars = self.vars.clone();
        vars[idx] = to.to_string();
        Scope { vars }
    }
}

impl fmt::Debug for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.vars.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_is_last() {
        let s = Scope::new(["x", "acc0"]);
        assert_eq!(s.vars(), &["x", "acc0", VALUE_VAR]);
        assert_eq!(s.nu_index(), 2);
        let s2 = s.with_var("y");
        assert_eq!(s2.vars(), &["x", "acc0", "y", VALUE_VAR]);
    }

    #[test]
    #[should_panic]
    fn duplicate_rejected() {
        Scope::new(["x", "x"]);
    }

    #[test]
    fn rename_and_drop() {
        let s = Scope::new(["x", "y"]);
        let r = s.renamed("x", "z");
        assert_eq!(r.vars(), &["z", "y", VALUE_VAR]);
        let d = r.without_var("y");
        assert_eq!(d.vars(), &["z", VALUE_VAR]);
    }
}
