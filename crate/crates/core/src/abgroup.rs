//! Finitely generated abelian groups `Z^r (+) Z/d_1 (+) ... (+) Z/d_m` in
//! invariant-factor form (`d_1 | d_2 | ...`, every `d_i >= 2`).

use std::fmt;
use std::iter::Sum;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Number, Value};

use crate::error::{Error, Result};

/// Equality of values is isomorphism of groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FinGenAbGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderStyle {
    Text,
    Json,
}

impl FinGenAbGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FinGenAbGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// `Z/|n|`, with `Z/0 = Z`.
    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        Self::from_cyclic_factors(&[n.into()])
    }

    /// Validating constructor for an already canonical description.
    pub fn from_invariant_factors(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        if let Some(bad) = torsion.iter().find(|t| **t < BigInt::from(2)) {
            return Err(Error::Parse(format!("torsion entry {bad} is below 2")));
        }
        if let Some(w) = torsion.windows(2).find(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::Parse(format!("{} does not divide {}", w[0], w[1])));
        }
        Ok(FinGenAbGroup { free_rank, torsion })
    }

    /// Direct sum of cyclic groups `Z/|n|`: `n = 0` adds a free summand and
    /// `n = +-1` contributes nothing.
    pub fn from_cyclic_factors<T: Into<BigInt> + Clone>(orders: &[T]) -> Self {
        let mut free_rank = 0;
        let mut finite = Vec::new();
        for n in orders {
            let n: BigInt = n.clone().into();
            if n.is_zero() {
                free_rank += 1;
            } else {
                finite.push(n.abs());
            }
        }
        FinGenAbGroup { free_rank, torsion: canonical_torsion(finite) }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, t| acc * t)
    }

    pub fn direct_sum(&self, other: &FinGenAbGroup) -> FinGenAbGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend(other.torsion.iter().cloned());
        FinGenAbGroup { free_rank: self.free_rank + other.free_rank, torsion: canonical_torsion(torsion) }
    }

    pub fn render(&self, style: RenderStyle) -> String {
        match style {
            RenderStyle::Text => self.to_string(),
            RenderStyle::Json => self.to_json().to_string(),
        }
    }

    /// `{"free_rank": r, "torsion": [d_1, ...]}` with exact integers.
    pub fn to_json(&self) -> Value {
        let torsion: Vec<Value> = self
            .torsion
            .iter()
            .map(|t| Value::Number(t.to_string().parse::<Number>().expect("integer literal")))
            .collect();
        json!({ "free_rank": self.free_rank, "torsion": torsion })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| Error::Parse("group must be an object".into()))?;
        let free_rank = obj
            .get("free_rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing or invalid free_rank".into()))?;
        let torsion = obj
            .get("torsion")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing or invalid torsion".into()))?
            .iter()
            .map(|t| match t {
                Value::Number(n) => {
                    n.to_string().parse::<BigInt>().map_err(|e| Error::Parse(format!("torsion entry {n}: {e}")))
                }
                other => Err(Error::Parse(format!("torsion entry {other} is not an integer"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_invariant_factors(free_rank as usize, torsion)
    }
}

/// Invariant factors of `(+) Z/t_i` for positive `t_i`, by pairwise
/// `(a, b) -> (gcd, lcm)` replacement. Trivial factors are dropped.
fn canonical_torsion(mut t: Vec<BigInt>) -> Vec<BigInt> {
    t.retain(|x| !x.is_one());
    t.sort();
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            let g = t[i].gcd(&t[j]);
            if g != t[i] {
                let l = &t[i] / &g * &t[j];
                t[i] = g;
                t[j] = l;
            }
        }
    }
    t.retain(|x| !x.is_one());
    t
}

impl fmt::Display for FinGenAbGroup {
    /// `Z^2 (+) Z/2 (+) Z/12`; the trivial group is `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        write!(f, "{}", parts.join(" (+) "))
    }
}

impl Sum for FinGenAbGroup {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        let mut free_rank = 0;
        let mut torsion = Vec::new();
        for g in iter {
            free_rank += g.free_rank;
            torsion.extend(g.torsion);
        }
        FinGenAbGroup { free_rank, torsion: canonical_torsion(torsion) }
    }
}

impl Serialize for FinGenAbGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinGenAbGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        FinGenAbGroup::from_json(&v).map_err(D::Error::custom)
    }
}
