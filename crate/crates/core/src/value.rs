//! The closed value algebra exchanged between machines.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Location index into nature.
pub type Location = u64;

/// A value that can sit on a tape, in a machine variable, or in a message.
///
/// `Null` is the distinguished ⊥ value. A method that produces no output at
/// all returns `None` at the call site; that is *not* a `Value`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Value {
    Null,
    Bool(bool),
    Int(i64),
    Bytes(Vec<u8>),
    Pair(Box<Value>, Box<Value>),
    Loc(Location),
}

impl Value {
    pub fn bytes(b: impl AsRef<[u8]>) -> Self {
        Value::Bytes(b.as_ref().to_vec())
    }

    pub fn pair(a: Value, b: Value) -> Self {
        Value::Pair(Box::new(a), Box::new(b))
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }

    pub fn as_bytes(&self) -> Option<&[u8]> {
        match self {
            Value::Bytes(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_loc(&self) -> Option<Location> {
        match self {
            Value::Loc(l) => Some(*l),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&Value, &Value)> {
        match self {
            Value::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Bytes(s.as_bytes().to_vec())
    }
}

impl From<Vec<u8>> for Value {
    fn from(b: Vec<u8>) -> Self {
        Value::Bytes(b)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Int(i)
    }
}

/// Canonical rendering used in reports. Printable ASCII byte strings are
/// quoted, anything else is hex.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Null => write!(f, "⊥"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Bytes(b) => {
                if !b.is_empty() && b.iter().all(|c| (0x20..0x7f).contains(c) && *c != b'"') {
                    write!(f, "\"{}\"", String::from_utf8_lossy(b))
                } else {
                    write!(f, "0x{}", hex::encode(b))
                }
            }
            Value::Pair(a, b) => write!(f, "({a}, {b})"),
            Value::Loc(l) => write!(f, "@{l}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_is_a_value_distinct_from_others() {
        assert_ne!(Value::Null, Value::Bool(false));
        assert_ne!(Value::Null, Value::bytes(""));
        assert_ne!(Value::Null, Value::Int(0));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Value::from("cats").to_string(), "\"cats\"");
        assert_eq!(Value::bytes([0x00, 0xff]).to_string(), "0x00ff");
        assert_eq!(Value::bytes([]).to_string(), "0x");
        assert_eq!(Value::pair(Value::Null, Value::Loc(3)).to_string(), "(⊥, @3)");
    }

    #[test]
    fn structural_equality() {
        let a = Value::pair("x".into(), Value::Int(1));
        let b = Value::pair("x".into(), Value::Int(1));
        assert_eq!(a, b);
        assert_ne!(a, Value::pair("x".into(), Value::Int(2)));
    }
}
