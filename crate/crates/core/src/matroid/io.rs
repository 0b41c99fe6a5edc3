//! Matroid file format: `{"n":4,"r":2,"nonbases":[[1,2]]}`.
//!
//! Elements are 1-based; each inner array ascends and the outer array is in
//! lexicographic order. Writers always emit that canonical form; readers
//! accept any order but reject duplicates, repeated elements, out-of-range
//! elements and sets of the wrong size.

use serde::{Deserialize, Serialize};

use super::{Matroid, MatroidError};
use crate::subset::SubsetMask;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatroidFile {
    pub n: usize,
    pub r: usize,
    pub nonbases: Vec<Vec<usize>>,
}

impl From<&Matroid> for MatroidFile {
    fn from(m: &Matroid) -> Self {
        let mut nonbases: Vec<Vec<usize>> = m
            .nonbases()
            .iter()
            .map(|x| x.elements().collect())
            .collect();
        nonbases.sort();
        Self {
            n: m.n(),
            r: m.rank(),
            nonbases,
        }
    }
}

impl MatroidFile {
    /// Checks the family and the matroid axioms.
    pub fn into_matroid(self) -> Result<Matroid, MatroidError> {
        let mut sets = Vec::with_capacity(self.nonbases.len());
        for raw in &self.nonbases {
            let x = SubsetMask::from_elements(self.n, raw.iter().copied()).ok_or_else(|| {
                MatroidError::Format(format!(
                    "{raw:?} has an element outside 1..={} or a repeated element",
                    self.n
                ))
            })?;
            sets.push(x);
        }
        Matroid::validate(self.n, self.r, &sets)
    }
}

pub fn to_json(m: &Matroid) -> String {
    serde_json::to_string(&MatroidFile::from(m)).expect("plain data serializes")
}

pub fn from_json(text: &str) -> Result<Matroid, MatroidError> {
    let file: MatroidFile =
        serde_json::from_str(text).map_err(|e| MatroidError::Format(e.to_string()))?;
    file.into_matroid()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trip() {
        let text = r#"{"n":4,"r":2,"nonbases":[[1,2]]}"#;
        let m = from_json(text).unwrap();
        assert_eq!(to_json(&m), text);
        let messy = r#"{ "r": 3, "n": 6, "nonbases": [[6,4,2], [1,2,3]] }"#;
        let m = from_json(messy).unwrap();
        assert_eq!(to_json(&m), r#"{"n":6,"r":3,"nonbases":[[1,2,3],[2,4,6]]}"#);
    }

    #[test]
    fn rejects_bad_files() {
        let cases = [
            r#"{"n":4,"r":2,"nonbases":[[1,2],[2,1]]}"#,
            r#"{"n":4,"r":2,"nonbases":[[1,2,3]]}"#,
            r#"{"n":4,"r":2,"nonbases":[[1,1]]}"#,
            r#"{"n":4,"r":2,"nonbases":[[0,1]]}"#,
            r#"{"n":4,"r":2,"nonbases":[[4,5]]}"#,
            r#"{"n":4,"r":2,"nonbases":[[1,2],[1,3]]}"#,
            r#"{"n":4,"r":5,"nonbases":[]}"#,
            r#"{"n":4,"r":2}"#,
            r#"{"n":4,"r":2,"nonbases":[],"extra":1}"#,
            "not json",
        ];
        for c in cases {
            assert!(from_json(c).is_err(), "{c}");
        }
        assert!(matches!(
            from_json(r#"{"n":4,"r":2,"nonbases":[[1,2],[2,1]]}"#),
            Err(MatroidError::Duplicate(_))
        ));
    }
}
