//! Freely reduced words in the two original generators.

use std::fmt;
use std::str::FromStr;

use crate::exactnum::NumError;
use crate::moebius::Mat2;

/// `A`, `B` and their inverses, written `a`, `b`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    fn symbol(self) -> char {
        match self {
            Letter::A => 'A',
            Letter::AInv => 'a',
            Letter::B => 'B',
            Letter::BInv => 'b',
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn a() -> Word {
        Word(vec![Letter::A])
    }

    pub fn b() -> Word {
        Word(vec![Letter::B])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Concatenation followed by free reduction at the seam.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// The matrix of the word, with `A` and `B` substituted.
    pub fn evaluate(&self, a: &Mat2, b: &Mat2) -> Result<Mat2, NumError> {
        let (ai, bi) = (a.inverse(), b.inverse());
        let mut acc = a.identity_like();
        for l in &self.0 {
            let m = match l {
                Letter::A => a,
                Letter::AInv => &ai,
                Letter::B => b,
                Letter::BInv => &bi,
            };
            acc = acc.mul(m)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "1" {
            return Ok(Word::identity());
        }
        let mut w = Word::identity();
        for (i, ch) in s.chars().enumerate() {
            let l = match ch {
                'A' => Letter::A,
                'a' => Letter::AInv,
                'B' => Letter::B,
                'b' => Letter::BInv,
                other => return Err(format!("bad letter `{other}` at {i}")),
            };
            w = w.mul(&Word(vec![l]));
        }
        Ok(w)
    }
}
