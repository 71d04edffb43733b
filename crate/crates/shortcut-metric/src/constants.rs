//! Shortcut constants `(a, a_0, b)` and the constants derived from them.
//!
//! Laakso shortcut families satisfy the shortcut axioms with `a = a_0 = 1` and
//! `b = 1/2`. Each function below evaluates the stated closed form, so the
//! Laakso values are computed rather than typed in.

use laakso_core::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShortcutConstants {
    pub a: Rational,
    pub a0: Rational,
    pub b: Rational,
}

pub const LAAKSO: ShortcutConstants = ShortcutConstants {
    a: Rational::new_raw(1, 1),
    a0: Rational::new_raw(1, 1),
    b: Rational::new_raw(1, 2),
};

fn min(x: Rational, y: Rational) -> Rational {
    if x < y { x } else { y }
}

fn max(x: Rational, y: Rational) -> Rational {
    if x > y { x } else { y }
}

impl ShortcutConstants {
    fn one(&self) -> Rational {
        Rational::from_integer(1)
    }

    /// Single-jump factor `1 + a/b`.
    pub fn single_jump(&self) -> Rational {
        self.one() + self.a / self.b
    }

    /// Contracted separation constant `b / (1 + a/b)`.
    pub fn separation(&self) -> Rational {
        self.b / self.single_jump()
    }

    /// Contracted diameter constant `min(2b, a_0) / (a (1 + a/b))`.
    pub fn diameter(&self) -> Rational {
        min(Rational::from_integer(2) * self.b, self.a0) / (self.a * self.single_jump())
    }

    /// Threshold `c` of the must-be-jump statement: `min(a_0, b) / (max(4, a) (1 + a/2b))`.
    pub fn must_be_jump(&self) -> Rational {
        let two = Rational::from_integer(2);
        min(self.a0, self.b) / (max(Rational::from_integer(4), self.a) * (self.one() + self.a / (two * self.b)))
    }

    /// Constant `max(4, a) (1 + a/b)^4 / min(a_0, b)` for the splitting of contracted balls.
    pub fn far_split(&self) -> Rational {
        let k = self.single_jump();
        max(Rational::from_integer(4), self.a) * k * k * k * k / min(self.a0, self.b)
    }

    /// Neighbourhood constant `C_0 = (1 + a/b)^2`.
    pub fn neighbourhood(&self) -> Rational {
        let k = self.single_jump();
        k * k
    }

    /// Net radius constant: every point is within `3/2 delta_i` of the level-`i` shortcuts on Laakso graphs.
    pub fn net(&self) -> Rational {
        Rational::new(3, 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laakso_values() {
        assert_eq!(LAAKSO.single_jump(), Rational::from_integer(3));
        assert_eq!(LAAKSO.separation(), Rational::new(1, 6));
        assert_eq!(LAAKSO.diameter(), Rational::new(1, 3));
        assert_eq!(LAAKSO.must_be_jump(), Rational::new(1, 16));
        assert_eq!(LAAKSO.far_split(), Rational::from_integer(648));
        assert_eq!(LAAKSO.neighbourhood(), Rational::from_integer(9));
    }
}
