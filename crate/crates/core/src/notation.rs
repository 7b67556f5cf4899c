//! Text notation for harmonic collections.
//!
//! ```text
//! collection := set (";" set)*
//! set        := elem ("," elem)*
//! elem       := integer ("^" positive-integer)?
//! ```
//!
//! Whitespace is ignored and the whole collection may be wrapped in braces.
//! When the input has neither commas nor carets, every set is read as a
//! string of single decimal digits (`"01347;23456"`).

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::correspondence::{HarmonicCollection, Mode};
use crate::harmonic::Multiset;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NotationError {
    #[error("empty collection")]
    Empty,
    #[error("unexpected token `{token}` in set {set}")]
    UnexpectedToken { token: String, set: usize },
    #[error("empty set at position {0}")]
    EmptySet(usize),
    #[error("element {elem} repeated in set {set}; use `{elem}^k` for multiplicities")]
    Repeated { elem: i64, set: usize },
    #[error("multiplicity must be positive in `{0}`")]
    ZeroMultiplicity(String),
    #[error("multiplicities are not allowed in simple mode (`{0}`)")]
    MultiplicityInSimpleMode(String),
}

/// Parses collection notation. `mode` forces multigraph mode; otherwise the
/// mode is multi exactly when a caret appears.
pub fn parse_collection(input: &str, mode: Option<Mode>) -> Result<HarmonicCollection, NotationError> {
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    let body = match compact.strip_prefix('{') {
        Some(rest) => rest.strip_suffix('}').ok_or_else(|| NotationError::UnexpectedToken {
            token: "{".to_string(),
            set: 0,
        })?,
        None => compact.as_str(),
    };
    if body.is_empty() {
        return Err(NotationError::Empty);
    }
    let has_caret = body.contains('^');
    let digit_form = !body.contains(',') && !has_caret;
    let mode = mode.unwrap_or(if has_caret { Mode::Multi } else { Mode::Simple });

    let mut sets = Vec::new();
    for (idx, chunk) in body.split(';').enumerate() {
        if chunk.is_empty() {
            return Err(NotationError::EmptySet(idx));
        }
        let set = if digit_form {
            parse_digit_set(chunk, idx)?
        } else {
            parse_set(chunk, idx, mode)?
        };
        sets.push(set);
    }
    Ok(HarmonicCollection::new(mode, sets).expect("parser enforces mode"))
}

fn parse_digit_set(chunk: &str, idx: usize) -> Result<Multiset, NotationError> {
    let mut set = Multiset::new();
    for c in chunk.chars() {
        let d = c.to_digit(10).ok_or_else(|| NotationError::UnexpectedToken {
            token: c.to_string(),
            set: idx,
        })? as i64;
        if set.contains(d) {
            return Err(NotationError::Repeated { elem: d, set: idx });
        }
        set.insert(d, BigUint::from(1u8)).expect("positive");
    }
    Ok(set)
}

fn parse_set(chunk: &str, idx: usize, mode: Mode) -> Result<Multiset, NotationError> {
    let mut set = Multiset::new();
    for token in chunk.split(',') {
        if token.is_empty() {
            return Err(NotationError::UnexpectedToken {
                token: ",".to_string(),
                set: idx,
            });
        }
        let bad = || NotationError::UnexpectedToken {
            token: token.to_string(),
            set: idx,
        };
        let (elem, mult) = match token.split_once('^') {
            Some((e, m)) => {
                let m: BigUint = m.parse().map_err(|_| bad())?;
                if m.is_zero() {
                    return Err(NotationError::ZeroMultiplicity(token.to_string()));
                }
                if mode == Mode::Simple && m != BigUint::from(1u8) {
                    return Err(NotationError::MultiplicityInSimpleMode(token.to_string()));
                }
                (e, m)
            }
            None => (token, BigUint::from(1u8)),
        };
        let elem: i64 = elem.parse().map_err(|_| bad())?;
        if set.contains(elem) {
            return Err(NotationError::Repeated { elem, set: idx });
        }
        set.insert(elem, mult).expect("positive");
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(s: &str) -> String {
        parse_collection(s, None).unwrap().to_string()
    }

    #[test]
    fn digit_form() {
        assert_eq!(show("01347;23456"), "0,1,3,4,7;2,3,4,5,6");
        assert_eq!(show("{ 123; 02346; 345 }"), "1,2,3;0,2,3,4,6;3,4,5");
    }

    #[test]
    fn comma_form_and_multiplicities() {
        assert_eq!(show("0,2,4,10"), "0,2,4,10");
        let c = parse_collection("0^6,1,2,3,4", None).unwrap();
        assert_eq!(c.mode(), Mode::Multi);
        assert_eq!(c.to_string(), "0^6,1,2,3,4");
        assert_eq!(show("-3,0,3"), "-3,0,3");
    }

    #[test]
    fn canonical_order_is_by_average() {
        assert_eq!(show("3458;135;024567"), "1,3,5;0,2,4,5,6,7;3,4,5,8");
    }

    #[test]
    fn forced_multi_mode() {
        let c = parse_collection("012", Some(Mode::Multi)).unwrap();
        assert_eq!(c.mode(), Mode::Multi);
    }

    #[test]
    fn errors_name_the_offending_token() {
        assert_eq!(
            parse_collection("01a;234", None),
            Err(NotationError::UnexpectedToken {
                token: "a".into(),
                set: 0
            })
        );
        assert_eq!(
            parse_collection("0,1,x2", None),
            Err(NotationError::UnexpectedToken {
                token: "x2".into(),
                set: 0
            })
        );
        assert_eq!(parse_collection("012;;345", None), Err(NotationError::EmptySet(1)));
        assert_eq!(parse_collection("  ", None), Err(NotationError::Empty));
        assert_eq!(
            parse_collection("0,1,1", None),
            Err(NotationError::Repeated { elem: 1, set: 0 })
        );
        assert_eq!(
            parse_collection("0^0,1,2", None),
            Err(NotationError::ZeroMultiplicity("0^0".into()))
        );
        assert_eq!(
            parse_collection("0^2,1,2", Some(Mode::Simple)),
            Err(NotationError::MultiplicityInSimpleMode("0^2".into()))
        );
        assert!(parse_collection("{012", None).is_err());
    }
}
