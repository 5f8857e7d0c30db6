//! Three-valued verdicts with a human-readable justification.

use crate::algebra::Tri;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail")]
pub enum Verdict {
    Yes(String),
    No(String),
    Unknown(String),
}

impl Verdict {
    pub fn yes(s: impl Into<String>) -> Verdict {
        Verdict::Yes(s.into())
    }

    pub fn no(s: impl Into<String>) -> Verdict {
        Verdict::No(s.into())
    }

    pub fn unknown(s: impl Into<String>) -> Verdict {
        Verdict::Unknown(s.into())
    }

    pub fn from_bool(b: bool, yes: impl Into<String>, no: impl Into<String>) -> Verdict {
        if b {
            Verdict::Yes(yes.into())
        } else {
            Verdict::No(no.into())
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn tri(&self) -> Tri {
        match self {
            Verdict::Yes(_) => Tri::Yes,
            Verdict::No(_) => Tri::No,
            Verdict::Unknown(_) => Tri::Unknown,
        }
    }

    pub fn detail(&self) -> &str {
        match self {
            Verdict::Yes(s) | Verdict::No(s) | Verdict::Unknown(s) => s,
        }
    }

    /// Conjunction: the first `No` wins, then the first `Unknown`.
    pub fn and(self, o: Verdict) -> Verdict {
        match (&self, &o) {
            (Verdict::No(_), _) => self,
            (_, Verdict::No(_)) => o,
            (Verdict::Unknown(_), _) => self,
            (_, Verdict::Unknown(_)) => o,
            (Verdict::Yes(a), Verdict::Yes(b)) => Verdict::Yes(format!("{}; {}", a, b)),
        }
    }

    /// Disjunction: the first `Yes` wins, then the first `Unknown`.
    pub fn or(self, o: Verdict) -> Verdict {
        match (&self, &o) {
            (Verdict::Yes(_), _) => self,
            (_, Verdict::Yes(_)) => o,
            (Verdict::Unknown(_), _) => self,
            (_, Verdict::Unknown(_)) => o,
            (Verdict::No(a), Verdict::No(b)) => Verdict::No(format!("{}; {}", a, b)),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Yes(_) => "yes",
            Verdict::No(_) => "no",
            Verdict::Unknown(_) => "unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.label(), self.detail())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjunction() {
        let y = Verdict::yes("a");
        assert!(y.clone().and(Verdict::yes("b")).is_yes());
        assert!(y.clone().and(Verdict::unknown("u")).is_unknown());
        assert!(Verdict::unknown("u").and(Verdict::no("n")).is_no());
        assert_eq!(serde_json::to_string(&Verdict::no("x")).unwrap(), r#"{"status":"No","detail":"x"}"#);
    }
}
