//! JSON forms of codes and word sets.
//!
//! A code is `{"n": 4, "codewords": [[1,2,3],[2,4],[]]}`: codewords are sorted
//! 1-based index arrays, listed largest first and then lexicographically, with
//! `∅` written as `[]`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::code::{Code, Codeword, EmptyWordPolicy, WordSet};
use crate::error::{Error, Result};

impl Serialize for Codeword {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.indices())
    }
}

impl<'de> Deserialize<'de> for Codeword {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let indices = Vec::<usize>::deserialize(deserializer)?;
        Codeword::from_indices(indices).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct CodeRepr {
    n: usize,
    codewords: Vec<Codeword>,
}

impl Serialize for Code {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CodeRepr {
            n: self.n(),
            codewords: self.display_words(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Code {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = CodeRepr::deserialize(deserializer)?;
        Code::new(repr.n, repr.codewords).map_err(D::Error::custom)
    }
}

/// Parses a code object, reporting whether `∅` had to be inserted.
pub fn parse_code(json: &str, policy: EmptyWordPolicy) -> Result<(Code, bool)> {
    let repr: CodeRepr = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    Code::try_new(repr.n, repr.codewords, policy)
}

/// A bare set of codewords: either an array of index arrays or an object
/// with a `codewords` field. No `∅` is added.
pub fn parse_word_set(json: &str) -> Result<WordSet> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        List(Vec<Codeword>),
        Object { codewords: Vec<Codeword> },
    }
    let repr: Repr = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(match repr {
        Repr::List(v) | Repr::Object { codewords: v } => v.into_iter().collect(),
    })
}
