use std::fmt;
use std::ops::Not;

/// A propositional variable, numbered from zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn pos(self) -> Lit {
        Lit::new(self, true)
    }

    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Lit {
        Lit::new(self, false)
    }
}

/// A literal: a variable together with a polarity.
///
/// Encoded as `2 * var + sign`, so the two literals of a variable are
/// adjacent and negation is a single xor.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit((var.0 << 1) | (!positive) as u32)
    }

    #[inline]
    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    #[inline]
    pub(crate) fn code(self) -> usize {
        self.0 as usize
    }

    /// Converts from the signed, one-based DIMACS convention.
    ///
    /// Panics on zero, which DIMACS reserves as the clause terminator.
    pub fn from_dimacs(x: i32) -> Lit {
        assert!(x != 0, "0 is not a DIMACS literal");
        Lit::new(Var(x.unsigned_abs() - 1), x > 0)
    }

    pub fn to_dimacs(self) -> i32 {
        let v = self.var().0 as i32 + 1;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }
}

impl Not for Lit {
    type Output = Lit;
    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A total assignment returned with a satisfiable verdict.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    pub fn new(values: Vec<bool>) -> Self {
        Model { values }
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    /// Value of `var`; variables beyond the model are reported false.
    #[inline]
    pub fn var_value(&self, var: Var) -> bool {
        self.values.get(var.index()).copied().unwrap_or(false)
    }

    #[inline]
    pub fn lit_value(&self, lit: Lit) -> bool {
        self.var_value(lit.var()) == lit.is_positive()
    }

    pub fn satisfies(&self, clause: &[Lit]) -> bool {
        clause.iter().any(|&l| self.lit_value(l))
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }
}
