//! Parties and exact row-stochastic channels used for public announcements.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::dist::{Event, Rational, TripartiteDistribution, Var};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Party {
    #[serde(rename = "A")]
    Alice,
    #[serde(rename = "B")]
    Bob,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }

    /// The variable this party holds.
    pub fn var(self) -> Var {
        match self {
            Party::Alice => Var::X,
            Party::Bob => Var::Y,
        }
    }

    pub fn value(self, e: &Event) -> usize {
        self.var().of(e)
    }
}

impl std::fmt::Display for Party {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Party::Alice => "Alice",
            Party::Bob => "Bob",
        })
    }
}

impl std::str::FromStr for Party {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "a" | "alice" => Ok(Party::Alice),
            "b" | "bob" => Ok(Party::Bob),
            other => Err(format!("unknown party {other:?} (expected alice or bob)")),
        }
    }
}

/// `W(m | v)`: one row per input value, one column per message.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Channel {
    #[serde(serialize_with = "ser_rows")]
    rows: Vec<Vec<Rational>>,
}

fn ser_rows<S: serde::Serializer>(rows: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let text: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(crate::dist::format_fraction).collect())
        .collect();
    serde::Serialize::serialize(&text, s)
}

impl Channel {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let width = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || width == 0 {
            return Err(Error::EmptyAlphabet);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::Protocol(format!("channel row {i} has {} entries, expected {width}", row.len())));
            }
            if row.iter().any(|p| *p < Rational::zero()) {
                return Err(Error::NegativeEntry { row: i });
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(Error::NotStochastic { row: i, sum });
            }
        }
        Ok(Self { rows })
    }

    /// Deterministic channel `v -> f(v)` over `inputs` values and `messages` symbols.
    pub fn deterministic(inputs: usize, messages: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        let rows = (0..inputs)
            .map(|v| {
                let m = f(v);
                if m >= messages {
                    return Err(Error::Protocol(format!("message {m} outside alphabet of {messages}")));
                }
                Ok((0..messages).map(|j| if j == m { Rational::one() } else { Rational::zero() }).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    pub fn inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn messages(&self) -> usize {
        self.rows[0].len()
    }

    pub fn prob(&self, input: usize, message: usize) -> Rational {
        self.rows
            .get(input)
            .and_then(|r| r.get(message))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }
}

/// Announce `m ~ W(·|v)` where `v` is `party`'s value. Returns, per message
/// with positive probability, the posterior and its mass.
pub fn announce(
    d: &TripartiteDistribution,
    party: Party,
    channel: &Channel,
) -> Result<Vec<(usize, TripartiteDistribution, Rational)>> {
    let need = d.size_of(party.var());
    if channel.inputs() < need {
        return Err(Error::Protocol(format!(
            "channel has {} input rows, {party} holds {need} values",
            channel.inputs()
        )));
    }
    let mut out = Vec::new();
    for m in 0..channel.messages() {
        if let Some((post, mass)) = d.reweight(|e| channel.prob(party.value(e), m)) {
            out.push((m, post, mass));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{build_base, ratio};

    #[test]
    fn rejects_bad_rows() {
        assert!(matches!(
            Channel::new(vec![vec![ratio(1, 2), ratio(1, 3)]]),
            Err(Error::NotStochastic { row: 0, .. })
        ));
        assert!(matches!(
            Channel::new(vec![vec![ratio(3, 2), ratio(-1, 2)]]),
            Err(Error::NegativeEntry { row: 0 })
        ));
    }

    #[test]
    fn parity_announcement_on_base() {
        let b = build_base(&ratio(1, 3)).unwrap();
        let ch = Channel::deterministic(4, 2, |x| x % 2).unwrap();
        let parts = announce(&b, Party::Alice, &ch).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].2, ratio(1, 3));
        assert_eq!(parts[1].2, ratio(2, 3));
        assert!(parts[0].1.events().keys().all(|e| e.x % 2 == 0));
    }

    #[test]
    fn party_parsing() {
        assert_eq!("bob".parse::<Party>().unwrap(), Party::Bob);
        assert_eq!("A".parse::<Party>().unwrap(), Party::Alice);
        assert!("eve".parse::<Party>().is_err());
    }
}
