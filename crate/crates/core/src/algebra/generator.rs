//! Mode generators `l_ij^{(r)}` packed so that the integer order is the PBW
//! order: all minus modes (`r < 0`) first, ordered by `(j - i, i, r)`, then all
//! plus modes (`r ≥ 0`) ordered by `(i - j, i, r)`.

use std::fmt;

use smallvec::SmallVec;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen(u64);

const R_OFFSET: i64 = 1 << 31;

impl Gen {
    /// `l_ij^{(r)}` with 1-based `i, j`.
    pub fn new(i: usize, j: usize, r: i64) -> Gen {
        debug_assert!((1..=127).contains(&i) && (1..=127).contains(&j));
        let plus = r >= 0;
        let d = if plus { i as i64 - j as i64 } else { j as i64 - i as i64 };
        let key = ((plus as u64) << 56)
            | (((d + 128) as u64) << 48)
            | ((i as u64) << 40)
            | ((r + R_OFFSET) as u64);
        Gen(key)
    }

    pub fn is_plus(self) -> bool {
        (self.0 >> 56) & 1 == 1
    }

    pub fn is_minus(self) -> bool {
        !self.is_plus()
    }

    pub fn i(self) -> usize {
        ((self.0 >> 40) & 0xff) as usize
    }

    pub fn j(self) -> usize {
        let d = ((self.0 >> 48) & 0xff) as i64 - 128;
        let i = self.i() as i64;
        (if self.is_plus() { i - d } else { i + d }) as usize
    }

    pub fn r(self) -> i64 {
        (self.0 & 0xffff_ffff) as i64 - R_OFFSET
    }

    pub fn is_diagonal(self) -> bool {
        self.i() == self.j()
    }

    /// Same matrix position, another mode.
    pub fn with_mode(self, r: i64) -> Gen {
        Gen::new(self.i(), self.j(), r)
    }
}

impl fmt::Debug for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l{}{}({})", self.i(), self.j(), self.r())
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A word in the generators; *normal* when nondecreasing.
pub type Monomial = SmallVec<[Gen; 6]>;

pub fn is_normal(m: &[Gen]) -> bool {
    m.windows(2).all(|w| w[0] <= w[1])
}

/// Parses the `Debug` form `l12(-3)`.
pub fn parse_gen(s: &str) -> Option<Gen> {
    let s = s.trim().strip_prefix('l')?;
    let (ij, rest) = s.split_once('(')?;
    let r: i64 = rest.strip_suffix(')')?.parse().ok()?;
    let b = ij.as_bytes();
    if b.len() != 2 {
        return None;
    }
    let i = (b[0] as char).to_digit(10)? as usize;
    let j = (b[1] as char).to_digit(10)? as usize;
    (i >= 1 && j >= 1).then(|| Gen::new(i, j, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields_round_trip() {
        for i in 1..=4 {
            for j in 1..=4 {
                for r in [-7, -1, 0, 3, 40] {
                    let g = Gen::new(i, j, r);
                    assert_eq!((g.i(), g.j(), g.r()), (i, j, r));
                    assert_eq!(parse_gen(&format!("{g:?}")), Some(g));
                }
            }
        }
    }

    #[test]
    fn pbw_order() {
        // minus before plus
        assert!(Gen::new(1, 2, -1) < Gen::new(2, 1, 0));
        // minus sector: j - i first
        assert!(Gen::new(2, 1, -1) < Gen::new(1, 1, -5));
        assert!(Gen::new(1, 1, -5) < Gen::new(1, 2, -9));
        // then i, then r
        assert!(Gen::new(1, 1, -1) < Gen::new(2, 2, -9));
        assert!(Gen::new(1, 1, -5) < Gen::new(1, 1, -1));
        // plus sector: i - j first
        assert!(Gen::new(1, 2, 7) < Gen::new(1, 1, 0));
        assert!(Gen::new(2, 2, 0) < Gen::new(2, 1, 0));
        assert!(Gen::new(1, 1, 0) < Gen::new(1, 1, 1));
    }
}
