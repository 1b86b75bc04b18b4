//! Cartan data for the simple types, Bourbaki numbering.

use std::fmt;

use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SimpleType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleFactor {
    pub kind: SimpleType,
    pub rank: usize,
}

impl fmt::Display for SimpleFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.kind, self.rank)
    }
}

impl SimpleFactor {
    pub fn new(kind: SimpleType, rank: usize) -> Result<Self> {
        let ok = match kind {
            SimpleType::A => rank >= 1,
            SimpleType::B => rank >= 2,
            SimpleType::C => rank >= 3,
            SimpleType::D => rank >= 4,
            SimpleType::E => (6..=8).contains(&rank),
            SimpleType::F => rank == 4,
            SimpleType::G => rank == 2,
        };
        if ok {
            Ok(Self { kind, rank })
        } else {
            Err(Error::Config(format!("invalid simple type {kind:?}{rank}")))
        }
    }

    /// Gram matrix of the simple roots, long roots of squared length 2.
    pub fn gram(&self) -> Vec<Vec<BigRational>> {
        let n = self.rank;
        let mut g = vec![vec![rat(0); n]; n];
        let half = BigRational::new(1.into(), 2.into());
        let link = |g: &mut Vec<Vec<BigRational>>, i: usize, j: usize, v: BigRational| {
            g[i][j] = v.clone();
            g[j][i] = v;
        };
        match self.kind {
            SimpleType::A | SimpleType::D | SimpleType::E => {
                for row in g.iter_mut().enumerate() {
                    row.1[row.0] = rat(2);
                }
                match self.kind {
                    SimpleType::A => (0..n - 1).for_each(|i| link(&mut g, i, i + 1, rat(-1))),
                    SimpleType::D => {
                        (0..n - 2).for_each(|i| link(&mut g, i, i + 1, rat(-1)));
                        link(&mut g, n - 3, n - 1, rat(-1));
                    }
                    _ => {
                        // 1-3-4-5-6-7-8 with 2 attached to 4
                        link(&mut g, 0, 2, rat(-1));
                        link(&mut g, 1, 3, rat(-1));
                        (2..n - 1).for_each(|i| link(&mut g, i, i + 1, rat(-1)));
                    }
                }
            }
            SimpleType::B => {
                (0..n - 1).for_each(|i| g[i][i] = rat(2));
                g[n - 1][n - 1] = rat(1);
                (0..n - 1).for_each(|i| link(&mut g, i, i + 1, rat(-1)));
            }
            SimpleType::C => {
                (0..n - 1).for_each(|i| g[i][i] = rat(1));
                g[n - 1][n - 1] = rat(2);
                (0..n - 2).for_each(|i| link(&mut g, i, i + 1, -half.clone()));
                link(&mut g, n - 2, n - 1, rat(-1));
            }
            SimpleType::F => {
                g[0][0] = rat(2);
                g[1][1] = rat(2);
                g[2][2] = rat(1);
                g[3][3] = rat(1);
                link(&mut g, 0, 1, rat(-1));
                link(&mut g, 1, 2, rat(-1));
                link(&mut g, 2, 3, -half);
            }
            SimpleType::G => {
                g[0][0] = BigRational::new(2.into(), 3.into());
                g[1][1] = rat(2);
                link(&mut g, 0, 1, rat(-1));
            }
        }
        g
    }

    pub fn weyl_order(&self) -> u128 {
        let n = self.rank as u128;
        let fact = |k: u128| (1..=k).product::<u128>();
        match self.kind {
            SimpleType::A => fact(n + 1),
            SimpleType::B | SimpleType::C => (1u128 << n) * fact(n),
            SimpleType::D => (1u128 << (n - 1)) * fact(n),
            SimpleType::E => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            SimpleType::F => 1_152,
            SimpleType::G => 12,
        }
    }
}

/// Parses "A2", "a1xa1", "B3,G2" into simple factors.
pub fn parse_group(spec: &str) -> Result<Vec<SimpleFactor>> {
    let tokens: Vec<&str> = spec
        .split(['x', 'X', ',', '×', '*'])
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.is_empty() {
        return Err(Error::Parse(format!("empty group specification {spec:?}")));
    }
    tokens
        .into_iter()
        .map(|tok| {
            let mut chars = tok.chars();
            let letter = chars.next().unwrap().to_ascii_uppercase();
            let kind = match letter {
                'A' => SimpleType::A,
                'B' => SimpleType::B,
                'C' => SimpleType::C,
                'D' => SimpleType::D,
                'E' => SimpleType::E,
                'F' => SimpleType::F,
                'G' => SimpleType::G,
                _ => return Err(Error::Parse(format!("unknown simple type in {tok:?}"))),
            };
            let rank: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::Parse(format!("bad rank in {tok:?}")))?;
            SimpleFactor::new(kind, rank)
        })
        .collect()
}
