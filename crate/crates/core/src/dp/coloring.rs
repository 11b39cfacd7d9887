//! Colorings of a middle set.
//!
//! A detailed coloring lists one symbol per middle-set vertex in the cyclic
//! order of the noose, cut open at its canonical start. Symbols pack into
//! 4-bit nibbles of a `u64`, first vertex in the most significant nibble, so
//! integer order is lexicographic order and a middle set holds at most
//! [`MAX_WIDTH`] vertices.
//!
//! Non-hat vertices belong to blocks, the traces of components on the middle
//! set. Blocks are non-crossing and read with a stack: `[` opens a block,
//! `*` continues the innermost open block, `]` closes it and `s` is a
//! singleton.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest middle set the packed encoding supports.
pub const MAX_WIDTH: usize = 16;

/// Block marker of a non-hat vertex.
pub const NO_BLOCK: u8 = u8::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BasicColor {
    /// Not chosen and not dominated inside the subgraph.
    Hat,
    /// Not chosen but dominated inside the subgraph.
    Zero,
    /// Chosen.
    One,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mark {
    Open,
    Close,
    Inner,
    Single,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    Hat,
    Zero(Mark),
    One(Mark),
}

impl Color {
    pub fn basic(self) -> BasicColor {
        match self {
            Color::Hat => BasicColor::Hat,
            Color::Zero(_) => BasicColor::Zero,
            Color::One(_) => BasicColor::One,
        }
    }

    pub fn mark(self) -> Option<Mark> {
        match self {
            Color::Hat => None,
            Color::Zero(m) | Color::One(m) => Some(m),
        }
    }

    pub fn with(basic: BasicColor, mark: Option<Mark>) -> Result<Color> {
        match (basic, mark) {
            (BasicColor::Hat, None) => Ok(Color::Hat),
            (BasicColor::Zero, Some(m)) => Ok(Color::Zero(m)),
            (BasicColor::One, Some(m)) => Ok(Color::One(m)),
            _ => Err(Error::MalformedState(format!(
                "{basic:?} with block mark {mark:?}"
            ))),
        }
    }

    pub(crate) fn nibble(self) -> u64 {
        let mark = |m: Mark| match m {
            Mark::Open => 1,
            Mark::Close => 2,
            Mark::Inner => 3,
            Mark::Single => 4,
        };
        match self {
            Color::Hat => 0,
            Color::Zero(m) => mark(m),
            Color::One(m) => 4 + mark(m),
        }
    }

    pub(crate) fn from_nibble(x: u64) -> Result<Color> {
        let mark = |k: u64| match k {
            1 => Mark::Open,
            2 => Mark::Close,
            3 => Mark::Inner,
            _ => Mark::Single,
        };
        match x {
            0 => Ok(Color::Hat),
            1..=4 => Ok(Color::Zero(mark(x))),
            5..=8 => Ok(Color::One(mark(x - 4))),
            _ => Err(Error::MalformedState(format!("symbol code {x}"))),
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |m: Mark| match m {
            Mark::Open => '[',
            Mark::Close => ']',
            Mark::Inner => '*',
            Mark::Single => 's',
        };
        match self {
            Color::Hat => f.write_str("0^"),
            Color::Zero(m) => write!(f, "0{}", mark(*m)),
            Color::One(m) => write!(f, "1{}", mark(*m)),
        }
    }
}

impl FromStr for Color {
    type Err = Error;

    fn from_str(s: &str) -> Result<Color> {
        let bad = || Error::MalformedState(format!("unknown symbol {s:?}"));
        let mut chars = s.trim().chars();
        let (Some(b), Some(m), None) = (chars.next(), chars.next(), chars.next()) else {
            return Err(bad());
        };
        let mark = match m {
            '[' => Mark::Open,
            ']' => Mark::Close,
            '*' => Mark::Inner,
            's' => Mark::Single,
            '^' if b == '0' => return Ok(Color::Hat),
            _ => return Err(bad()),
        };
        match b {
            '0' => Ok(Color::Zero(mark)),
            '1' => Ok(Color::One(mark)),
            _ => Err(bad()),
        }
    }
}

/// A detailed coloring in packed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coloring {
    code: u64,
    len: u8,
}

impl Coloring {
    /// The coloring of an empty middle set.
    pub const EMPTY: Coloring = Coloring { code: 0, len: 0 };

    pub(crate) fn from_code(code: u64, len: usize) -> Coloring {
        Coloring {
            code,
            len: len as u8,
        }
    }

    /// Packs `colors`, checking that the brackets balance.
    pub fn new(colors: &[Color]) -> Result<Coloring> {
        if colors.len() > MAX_WIDTH {
            return Err(Error::Domain(format!(
                "middle set of {} vertices exceeds the supported width {MAX_WIDTH}",
                colors.len()
            )));
        }
        let code = colors.iter().fold(0u64, |acc, c| (acc << 4) | c.nibble());
        let c = Coloring::from_code(code, colors.len());
        c.blocks()?;
        Ok(c)
    }

    /// Builds the coloring whose blocks are given by `labels` (any labels,
    /// [`NO_BLOCK`] for hat vertices). Fails when two blocks cross.
    pub fn from_blocks(basic: &[BasicColor], labels: &[u8]) -> Result<Coloring> {
        let colors = marks_for(basic, labels)?;
        Coloring::new(&colors)
    }

    pub fn len(&self) -> usize {
        usize::from(self.len)
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    pub fn get(&self, i: usize) -> Color {
        let shift = 4 * (self.len() - 1 - i);
        Color::from_nibble((self.code >> shift) & 0xf).expect("packed symbols are valid")
    }

    pub fn colors(&self) -> Vec<Color> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    pub fn basic(&self) -> Vec<BasicColor> {
        (0..self.len()).map(|i| self.get(i).basic()).collect()
    }

    /// Block index per position (numbered by first occurrence), or
    /// [`NO_BLOCK`] for hat vertices.
    pub fn blocks(&self) -> Result<Vec<u8>> {
        let mut out = vec![NO_BLOCK; self.len()];
        let mut stack: Vec<u8> = Vec::new();
        let mut next = 0u8;
        for i in 0..self.len() {
            let x = (self.code >> (4 * (self.len() - 1 - i))) & 0xf;
            let c = Color::from_nibble(x)?;
            match c.mark() {
                None => {}
                Some(Mark::Single) => {
                    out[i] = next;
                    next += 1;
                }
                Some(Mark::Open) => {
                    out[i] = next;
                    stack.push(next);
                    next += 1;
                }
                Some(Mark::Inner) | Some(Mark::Close) => {
                    let top = stack.last().copied().ok_or_else(|| {
                        Error::MalformedState(format!(
                            "{self}: position {i} continues no open block"
                        ))
                    })?;
                    out[i] = top;
                    if c.mark() == Some(Mark::Close) {
                        stack.pop();
                    }
                }
            }
        }
        if !stack.is_empty() {
            return Err(Error::MalformedState(format!("{self}: unclosed block")));
        }
        Ok(out)
    }
}

/// Derives block marks from labels, rejecting crossing blocks.
pub(crate) fn marks_for(basic: &[BasicColor], labels: &[u8]) -> Result<Vec<Color>> {
    let k = basic.len();
    let mut first = [usize::MAX; 256];
    let mut last = [0usize; 256];
    for (i, &l) in labels.iter().enumerate() {
        if l != NO_BLOCK {
            let l = usize::from(l);
            first[l] = first[l].min(i);
            last[l] = i;
        }
    }
    let mut colors = Vec::with_capacity(k);
    let mut stack: Vec<u8> = Vec::new();
    for i in 0..k {
        let l = labels[i];
        let mark = if l == NO_BLOCK {
            None
        } else {
            let (f, z) = (first[usize::from(l)], last[usize::from(l)]);
            let m = if f == z {
                Mark::Single
            } else if i == f {
                Mark::Open
            } else if i == z {
                Mark::Close
            } else {
                Mark::Inner
            };
            match m {
                Mark::Open => stack.push(l),
                Mark::Inner | Mark::Close => {
                    if stack.last() != Some(&l) {
                        return Err(Error::MalformedState(format!(
                            "crossing blocks at position {i}"
                        )));
                    }
                    if m == Mark::Close {
                        stack.pop();
                    }
                }
                Mark::Single => {}
            }
            Some(m)
        };
        colors.push(Color::with(basic[i], mark)?);
    }
    Ok(colors)
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", self.get(i))?;
        }
        Ok(())
    }
}

impl FromStr for Coloring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Coloring> {
        if s.trim().is_empty() {
            return Ok(Coloring::EMPTY);
        }
        let colors = s
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<Color>>>()?;
        Coloring::new(&colors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nibbles_round_trip() {
        for x in 0..9 {
            assert_eq!(Color::from_nibble(x).unwrap().nibble(), x);
        }
        assert!(Color::from_nibble(9).is_err());
    }

    #[test]
    fn parse_and_print() {
        let c: Coloring = "0[,1*,0^,1s,0]".parse().unwrap();
        assert_eq!(c.to_string(), "0[,1*,0^,1s,0]");
        assert_eq!(c.len(), 5);
        assert_eq!(c.blocks().unwrap(), vec![0, 0, NO_BLOCK, 1, 0]);
        assert_eq!(c.basic()[2], BasicColor::Hat);
        assert_eq!("".parse::<Coloring>().unwrap(), Coloring::EMPTY);
    }

    #[test]
    fn unbalanced_states_are_rejected() {
        assert!("0[,1*".parse::<Coloring>().is_err());
        assert!("0]".parse::<Coloring>().is_err());
        assert!("1*,0s".parse::<Coloring>().is_err());
        assert!("0x".parse::<Coloring>().is_err());
    }

    #[test]
    fn nested_blocks() {
        let c: Coloring = "1[,0[,0],1]".parse().unwrap();
        assert_eq!(c.blocks().unwrap(), vec![0, 1, 1, 0]);
    }

    #[test]
    fn from_blocks_detects_crossing() {
        use BasicColor::*;
        let basic = [One, Zero, One, Zero];
        assert!(Coloring::from_blocks(&basic, &[0, 1, 0, 1]).is_err());
        let c = Coloring::from_blocks(&basic, &[7, 3, 3, 7]).unwrap();
        assert_eq!(c.to_string(), "1[,0[,1],0]");
    }

    #[test]
    fn code_order_is_lexicographic() {
        let a: Coloring = "0^,1s".parse().unwrap();
        let b: Coloring = "0s,0^".parse().unwrap();
        assert!(a < b);
    }
}
