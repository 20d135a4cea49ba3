//! Serde helpers: exact rationals travel as `"p/q"` strings.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Deserialize, Deserializer, Serializer};

pub fn rat_to_string(r: &Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `3`, `-1/2` or a decimal like `0.25` (decimals must be short and exact).
pub fn parse_rational(s: &str) -> Option<Rational64> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Rational64::new(p, q));
    }
    if let Ok(n) = s.parse::<i64>() {
        return Some(Rational64::from_integer(n));
    }
    let (int, frac) = s.split_once('.')?;
    if frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let neg = int.trim_start().starts_with('-');
    let i: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().ok()? };
    let den = 10i64.pow(frac.len() as u32);
    let f: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    let mag = Rational64::from_integer(i.abs()) + Rational64::new(f, den);
    Some(if neg { -mag } else { mag })
}

pub fn rat<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rat_to_string(r))
}

pub fn rat_de<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
    let s = String::deserialize(d)?;
    parse_rational(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational `{s}`")))
}

pub fn rat_matrix<S: Serializer>(m: &[Vec<Rational64>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for row in m {
        let r: Vec<String> = row.iter().map(rat_to_string).collect();
        seq.serialize_element(&r)?;
    }
    seq.end()
}

pub fn rat_map<K, S>(m: &BTreeMap<K, Rational64>, s: S) -> Result<S::Ok, S::Error>
where
    K: serde::Serialize,
    S: Serializer,
{
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(k, &rat_to_string(v))?;
    }
    map.end()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_rational("1"), Some(Rational64::from_integer(1)));
        assert_eq!(parse_rational("-1/2"), Some(Rational64::new(-1, 2)));
        assert_eq!(parse_rational("0.25"), Some(Rational64::new(1, 4)));
        assert_eq!(parse_rational("-0.5"), Some(Rational64::new(-1, 2)));
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("1/0"), None);
    }
}
