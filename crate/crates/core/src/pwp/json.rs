use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{PwpError, PwpMap};
use crate::exactnum::{AlgebraicReal, Scalar};
use crate::moebius::Mat2;

/// One piece of the document form `{"left", "right", "mat"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PieceDoc<T> {
    pub left: String,
    pub right: String,
    pub mat: Mat2<T>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ElementDoc<T> {
    pub pieces: Vec<PieceDoc<T>>,
}

impl<T: Scalar> From<&PwpMap<T>> for ElementDoc<T> {
    fn from(h: &PwpMap<T>) -> Self {
        let pieces = h
            .pieces()
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let (lo, hi) = h.piece_interval(i);
                PieceDoc {
                    left: lo.map_or_else(|| "-inf".to_string(), ToString::to_string),
                    right: hi.map_or_else(|| "+inf".to_string(), ToString::to_string),
                    mat: m.clone(),
                }
            })
            .collect();
        ElementDoc { pieces }
    }
}

impl<T: Scalar> TryFrom<ElementDoc<T>> for PwpMap<T> {
    type Error = PwpError;

    fn try_from(doc: ElementDoc<T>) -> Result<Self, PwpError> {
        let n = doc.pieces.len();
        if n == 0 {
            return Err(PwpError::Malformed("no pieces".into()));
        }
        if doc.pieces[0].left.trim() != "-inf" {
            return Err(PwpError::Malformed("first piece must start at -inf".into()));
        }
        if !matches!(doc.pieces[n - 1].right.trim(), "+inf" | "inf") {
            return Err(PwpError::Malformed("last piece must end at +inf".into()));
        }
        let parse = |s: &str| -> Result<AlgebraicReal, PwpError> { Ok(s.trim().parse()?) };
        let mut breakpoints = Vec::with_capacity(n - 1);
        for w in doc.pieces.windows(2) {
            let (r, l) = (parse(&w[0].right)?, parse(&w[1].left)?);
            if r != l {
                return Err(PwpError::Malformed(format!("gap between {r} and {l}")));
            }
            breakpoints.push(r);
        }
        PwpMap::from_pieces(breakpoints, doc.pieces.into_iter().map(|p| p.mat).collect())
    }
}

impl<T: Scalar> Serialize for PwpMap<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ElementDoc::from(self).serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for PwpMap<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = ElementDoc::<T>::deserialize(d)?;
        PwpMap::try_from(doc).map_err(D::Error::custom)
    }
}
