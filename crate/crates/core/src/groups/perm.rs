use crate::error::{Error, Result};
use std::fmt;

/// A permutation of `{0, .., n-1}` stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u32>);

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    /// `(self * other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            out[x as usize] = i as u32;
        }
        Perm(out)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// From 1-based cycles on `degree` points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Perm> {
        let mut img: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                if a == 0 || a as usize > degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {a} outside 1..={degree}"
                    )));
                }
                if std::mem::replace(&mut seen[a as usize - 1], true) {
                    return Err(Error::InvalidPermutation(format!(
                        "point {a} appears twice"
                    )));
                }
                let b = cyc[(k + 1) % cyc.len()];
                img[a as usize - 1] = b - 1;
            }
        }
        Ok(Perm(img))
    }

    /// 1-based cycles of length at least 2.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] || self.0[s] as usize == s {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x as u32 + 1);
                x = self.0[x] as usize;
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_string(&self) -> String {
        let cs = self.cycles();
        if cs.is_empty() {
            return "()".into();
        }
        cs.iter()
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("({})", inner.join(" "))
            })
            .collect()
    }
}
