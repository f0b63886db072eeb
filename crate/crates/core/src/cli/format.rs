//! JSON file formats for structures and cochains.
//!
//! Scalars are strings (`"3"`, `"-1/2"`); JSON numbers in scalar position
//! are rejected.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::complexes::{Cochain, ComplexError};
use crate::linalg::field::parse_rational;
use crate::linalg::{ExactField, Scalar, SparseVec};
use crate::structures::{EntwiningMap, EntwiningStructure, FiniteAlgebra, FiniteCoalgebra, StructureError};

/// Largest algebra or coalgebra dimension accepted from a file.
pub const MAX_FILE_DIM: usize = 16;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("cannot change the field from {from} to {to}: {reason}")]
    FieldOverride { from: ExactField, to: ExactField, reason: String },
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(pos) => message[..pos].to_string(),
            None => message,
        };
        FormatError::Syntax { line: e.line(), column: e.column(), message }
    }
}

fn invalid(path: impl Into<String>, message: impl fmt::Display) -> FormatError {
    FormatError::Invalid { path: path.into(), message: message.to_string() }
}

/// A field descriptor, `"q"` or `"fp:P"`, checked while parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldText(pub ExactField);

impl Serialize for FieldText {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for FieldText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        ExactField::from_str(&text).map(FieldText).map_err(de::Error::custom)
    }
}

/// A scalar literal whose syntax is checked while parsing; mapping into a
/// field happens once the field is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarText(pub String);

impl ScalarText {
    fn is_integral(&self) -> bool {
        parse_rational(&self.0).map(|r| r.is_integer()).unwrap_or(false)
    }

    fn to_scalar(&self, field: ExactField, path: impl Into<String>) -> Result<Scalar, FormatError> {
        field.parse_scalar(&self.0).map_err(|e| invalid(path, e))
    }
}

impl From<&Scalar> for ScalarText {
    fn from(s: &Scalar) -> Self {
        ScalarText(s.to_canonical_string())
    }
}

impl Serialize for ScalarText {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for ScalarText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ScalarText;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a scalar string such as \"3\" or \"-1/2\"")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ScalarText, E> {
                parse_rational(v).map_err(E::custom)?;
                Ok(ScalarText(v.trim().to_string()))
            }
        }
        d.deserialize_str(V)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSection {
    pub dim: usize,
    #[serde(default = "default_true")]
    pub unital: bool,
    /// Coordinates of the unit; required when `unital` is set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<ScalarText>>,
    /// `[i, j, k, θ]`: `θ e_k` occurs in `e_i e_j`.
    pub mul: Vec<(usize, usize, usize, ScalarText)>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoalgebraSection {
    pub dim: usize,
    pub counit: Vec<ScalarText>,
    /// `[k, i, j, w]`: `w c_i ⊗ c_j` occurs in `Δ(c_k)`.
    pub comul: Vec<(usize, usize, usize, ScalarText)>,
}

/// The on-disk form of an entwining structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub field: FieldText,
    pub algebra: AlgebraSection,
    pub coalgebra: CoalgebraSection,
    /// `[i, j, p, q, w]`: `w e_p ⊗ c_q` occurs in `ψ(c_i ⊗ e_j)`.
    pub psi: Vec<(usize, usize, usize, usize, ScalarText)>,
}

impl StructureFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    fn scalars(&self) -> impl Iterator<Item = &ScalarText> {
        self.algebra
            .unit
            .iter()
            .flatten()
            .chain(self.algebra.mul.iter().map(|e| &e.3))
            .chain(self.coalgebra.counit.iter())
            .chain(self.coalgebra.comul.iter().map(|e| &e.3))
            .chain(self.psi.iter().map(|e| &e.4))
    }

    /// The field the structure is built over: the file's own, or `over`
    /// when the file is over `Q` with integral structure constants.
    pub fn resolve_field(&self, over: Option<ExactField>) -> Result<ExactField, FormatError> {
        let own = self.field.0;
        let Some(target) = over else { return Ok(own) };
        if target == own {
            return Ok(own);
        }
        if own != ExactField::Rationals {
            return Err(FormatError::FieldOverride {
                from: own,
                to: target,
                reason: "only structures over q can be moved to another field".into(),
            });
        }
        if let Some(s) = self.scalars().find(|s| !s.is_integral()) {
            return Err(FormatError::FieldOverride {
                from: own,
                to: target,
                reason: format!("structure constant `{}` is not integral", s.0),
            });
        }
        Ok(target)
    }

    pub fn to_structure(&self, over: Option<ExactField>) -> Result<EntwiningStructure, FormatError> {
        let field = self.resolve_field(over)?;
        let (da, dc) = (self.algebra.dim, self.coalgebra.dim);
        for (path, dim) in [("algebra.dim", da), ("coalgebra.dim", dc)] {
            if dim == 0 {
                return Err(invalid(path, "dimension must be positive"));
            }
            if dim > MAX_FILE_DIM {
                return Err(invalid(path, StructureError::DimensionCap { dim, cap: MAX_FILE_DIM }));
            }
        }

        let mut mul = Vec::with_capacity(self.algebra.mul.len());
        for (n, (i, j, k, w)) in self.algebra.mul.iter().enumerate() {
            let path = format!("algebra.mul[{n}]");
            check_indices(&path, &[*i, *j, *k], &[da, da, da])?;
            mul.push((*i, *j, *k, w.to_scalar(field, path)?));
        }
        let unit = match (&self.algebra.unit, self.algebra.unital) {
            (Some(u), _) => Some(dense(u, da, field, "algebra.unit")?),
            (None, true) => return Err(invalid("algebra.unit", "a unital algebra needs a unit")),
            (None, false) => None,
        };
        let unit = if self.algebra.unital { unit } else { None };
        let algebra = FiniteAlgebra::from_entries(field, da, mul, unit)?;

        let mut comul = Vec::with_capacity(self.coalgebra.comul.len());
        for (n, (k, i, j, w)) in self.coalgebra.comul.iter().enumerate() {
            let path = format!("coalgebra.comul[{n}]");
            check_indices(&path, &[*k, *i, *j], &[dc, dc, dc])?;
            comul.push((*k, *i, *j, w.to_scalar(field, path)?));
        }
        if self.coalgebra.counit.len() != dc {
            return Err(invalid(
                "coalgebra.counit",
                format!("expected {dc} entries, got {}", self.coalgebra.counit.len()),
            ));
        }
        let counit = self
            .coalgebra
            .counit
            .iter()
            .enumerate()
            .map(|(n, w)| w.to_scalar(field, format!("coalgebra.counit[{n}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let coalgebra = FiniteCoalgebra::from_entries(field, dc, comul, counit)?;

        let mut psi = Vec::with_capacity(self.psi.len());
        for (n, (i, j, p, q, w)) in self.psi.iter().enumerate() {
            let path = format!("psi[{n}]");
            check_indices(&path, &[*i, *j, *p, *q], &[dc, da, da, dc])?;
            psi.push((*i, *j, *p, *q, w.to_scalar(field, path)?));
        }
        let entwining = EntwiningMap::from_entries(dc, da, psi)?;
        Ok(EntwiningStructure::new(algebra, coalgebra, entwining)?)
    }

    /// Canonical form: entries in index order, zero coefficients dropped.
    pub fn from_structure(s: &EntwiningStructure) -> Self {
        let alg = s.algebra();
        let coalg = s.coalgebra();
        let unit = alg.unit().map(|u| {
            let mut dense = vec![ScalarText::from(&s.field().zero()); alg.dim()];
            for (k, w) in u {
                dense[*k] = w.into();
            }
            dense
        });
        StructureFile {
            field: FieldText(s.field()),
            algebra: AlgebraSection {
                dim: alg.dim(),
                unital: alg.is_unital(),
                unit,
                mul: alg.entries().map(|(i, j, k, w)| (i, j, k, w.into())).collect(),
            },
            coalgebra: CoalgebraSection {
                dim: coalg.dim(),
                counit: coalg.counit().iter().map(ScalarText::from).collect(),
                comul: coalg.entries().map(|(k, i, j, w)| (k, i, j, w.into())).collect(),
            },
            psi: s.entwining().entries().map(|(i, j, p, q, w)| (i, j, p, q, w.into())).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        render(&serde_json::to_value(self).expect("serializable"))
    }
}

/// Indented JSON in which arrays of scalars stay on one line.
pub fn render(v: &Value) -> String {
    let mut out = String::new();
    render_into(v, 0, &mut out);
    out
}

fn render_into(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.iter().any(|x| x.is_array() || x.is_object()) => {
            out.push_str("[\n");
            for (k, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                render_into(x, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (k, (key, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                render_into(x, indent + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn check_indices(path: &str, idx: &[usize], bounds: &[usize]) -> Result<(), FormatError> {
    for (pos, (&i, &b)) in idx.iter().zip(bounds).enumerate() {
        if i >= b {
            return Err(invalid(
                path,
                format!("index {i} in position {pos} is out of range (dimension {b})"),
            ));
        }
    }
    Ok(())
}

fn dense(v: &[ScalarText], dim: usize, field: ExactField, path: &str) -> Result<SparseVec, FormatError> {
    if v.len() != dim {
        return Err(invalid(path, format!("expected {dim} entries, got {}", v.len())));
    }
    let mut out = Vec::new();
    for (k, w) in v.iter().enumerate() {
        let w = w.to_scalar(field, format!("{path}[{k}]"))?;
        if !w.is_zero() {
            out.push((k, w));
        }
    }
    Ok(out)
}

/// Parses a comma-separated coefficient list such as `1,0,-1/2`.
pub fn parse_vector(text: &str, dim: usize, field: ExactField, what: &str) -> Result<SparseVec, FormatError> {
    let parts: Vec<ScalarText> = text.split(',').map(|p| ScalarText(p.trim().to_string())).collect();
    dense(&parts, dim, field, what)
}

/// One item of a cochain entry: an index or the trailing scalar string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryItem {
    Index(usize),
    Value(ScalarText),
}

/// The on-disk form of a cochain: `[c, a_1, .., a_{n+1}, "value"]` entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainFile {
    pub degree: usize,
    pub entries: Vec<Vec<EntryItem>>,
}

impl CochainFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_cochain(&self, s: &EntwiningStructure) -> Result<Cochain, FormatError> {
        let arity = self.degree + 3;
        let (dc, da) = (s.dim_c(), s.dim_a());
        let mut entries = Vec::with_capacity(self.entries.len());
        for (n, e) in self.entries.iter().enumerate() {
            let path = format!("entries[{n}]");
            if e.len() != arity {
                return Err(invalid(
                    path,
                    format!(
                        "expected {arity} items (coalgebra index, {} algebra indices, value), got {}",
                        self.degree + 1,
                        e.len()
                    ),
                ));
            }
            let mut idx = Vec::with_capacity(arity - 1);
            for item in &e[..arity - 1] {
                match item {
                    EntryItem::Index(i) => idx.push(*i),
                    EntryItem::Value(_) => return Err(invalid(&path, "indices must be integers")),
                }
            }
            let EntryItem::Value(v) = &e[arity - 1] else {
                return Err(invalid(&path, "the last item must be a scalar string"));
            };
            let mut bounds = vec![da; arity - 1];
            bounds[0] = dc;
            check_indices(&path, &idx, &bounds)?;
            entries.push((idx[0], idx[1..].to_vec(), v.to_scalar(s.field(), &path)?));
        }
        Ok(Cochain::from_entries(s, self.degree, merge(entries))?)
    }

    pub fn from_cochain(g: &Cochain) -> Self {
        CochainFile {
            degree: g.degree(),
            entries: g
                .entries()
                .into_iter()
                .map(|(c, a, v)| {
                    std::iter::once(EntryItem::Index(c))
                        .chain(a.into_iter().map(EntryItem::Index))
                        .chain(std::iter::once(EntryItem::Value((&v).into())))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        render(&serde_json::to_value(self).expect("serializable"))
    }
}

/// Repeated coordinates add up.
fn merge(entries: Vec<(usize, Vec<usize>, Scalar)>) -> Vec<(usize, Vec<usize>, Scalar)> {
    let mut map: std::collections::BTreeMap<(usize, Vec<usize>), Scalar> = Default::default();
    for (c, a, v) in entries {
        match map.entry((c, a)) {
            std::collections::btree_map::Entry::Occupied(mut o) => *o.get_mut() += &v,
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(v);
            }
        }
    }
    map.into_iter().map(|((c, a), v)| (c, a, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLIP: &str = r#"{
  "field": "q",
  "algebra": {"dim": 1, "unit": ["1"], "mul": [[0, 0, 0, "1"]]},
  "coalgebra": {"dim": 1, "counit": ["1"], "comul": [[0, 0, 0, "1"]]},
  "psi": [[0, 0, 0, 0, "1"]]
}"#;

    #[test]
    fn parses_the_ground_structure() {
        let s = StructureFile::parse(FLIP).unwrap().to_structure(None).unwrap();
        assert_eq!(s, EntwiningStructure::trivial(ExactField::Rationals));
    }

    #[test]
    fn composite_modulus_is_a_positioned_error() {
        let text = FLIP.replace("\"q\"", "\"fp:91\"");
        match StructureFile::parse(&text) {
            Err(FormatError::Syntax { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("not prime"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn float_scalars_are_rejected() {
        let text = FLIP.replace("[[0, 0, 0, 0, \"1\"]]", "[[0, 0, 0, 0, 1.0]]");
        assert!(matches!(StructureFile::parse(&text), Err(FormatError::Syntax { line: 5, .. })));
    }

    #[test]
    fn index_errors_name_the_entry() {
        let text = FLIP.replace("[[0, 0, 0, 0, \"1\"]]", "[[0, 0, 0, 0, \"1\"], [0, 2, 0, 0, \"1\"]]");
        let err = StructureFile::parse(&text).unwrap().to_structure(None).unwrap_err();
        assert!(err.to_string().starts_with("psi[1]:"), "{err}");
    }

    #[test]
    fn field_override_requires_integral_constants() {
        let file = StructureFile::parse(FLIP).unwrap();
        let f7 = ExactField::prime(7).unwrap();
        assert_eq!(file.to_structure(Some(f7)).unwrap().field(), f7);
        let halves = StructureFile::parse(
            &FLIP.replace("\"psi\": [[0, 0, 0, 0, \"1\"]]", "\"psi\": [[0, 0, 0, 0, \"2/2\"]]"),
        )
        .unwrap();
        assert!(halves.to_structure(None).is_ok());
        let text = FLIP.replace("[[0, 0, 0, 0, \"1\"]]", "[[0, 0, 0, 0, \"1/2\"]]");
        let file = StructureFile::parse(&text).unwrap();
        assert!(matches!(file.to_structure(Some(f7)), Err(FormatError::FieldOverride { .. })));
    }

    #[test]
    fn cochain_round_trip() {
        let s = EntwiningStructure::trivial(ExactField::Rationals);
        let file = CochainFile::parse(r#"{"degree": 1, "entries": [[0, 0, 0, "3/4"]]}"#).unwrap();
        let g = file.to_cochain(&s).unwrap();
        assert_eq!(CochainFile::from_cochain(&g), file);
        let bad = CochainFile::parse(r#"{"degree": 1, "entries": [[0, 0, "3/4"]]}"#).unwrap();
        assert!(bad.to_cochain(&s).is_err());
    }
}
