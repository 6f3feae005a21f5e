//! The `decorated-triangulation/v1` document format.
//!
//! Complex numbers are `[re, im]` pairs. Matrices are row-major
//! (`vertices[v][row][col]`). Unknown fields are rejected. Serialization is
//! deterministic: struct fields in declaration order, Ptolemy keys sorted,
//! floats printed in shortest round-trip form.

use std::collections::BTreeMap;

use flagvol_core::ptolemy::{Decoration, PtolemyCoordinates, PtolemyTuple};
use flagvol_core::triangulation::{FaceRef, Orientation};
use flagvol_core::{Complex, DecoratedComplex, Gluing, Mat3, Payload, Tetrahedron};
use serde::{Deserialize, Serialize};

/// Value of the `format` field.
pub const FORMAT_TAG: &str = "decorated-triangulation/v1";

/// Why a document could not be turned into a complex.
#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    /// Not a well-formed document of this format.
    #[error("parse error: {0}")]
    Parse(String),
    /// Well formed, but the data violates a structural or numerical rule.
    #[error("invalid document: {0}")]
    Invalid(#[from] flagvol_core::Error),
}

type Pair = [f64; 2];

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    format: String,
    group: Group,
    tetrahedra: Vec<TetDoc>,
    gluings: Vec<GluingDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Group {
    n: u32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TetDoc {
    id: i64,
    orientation: i64,
    decoration: DecorationDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum DecorationDoc {
    Matrices { vertices: [[[Pair; 3]; 3]; 4] },
    Ptolemy { coords: BTreeMap<String, Pair> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GluingDoc {
    tets: [i64; 2],
    faces: [u8; 2],
    vertex_map: [u8; 3],
}

fn c(p: Pair) -> Complex {
    Complex::new(p[0], p[1])
}

fn pair(z: Complex) -> Pair {
    [z.re, z.im]
}

/// Parses and validates a document.
pub fn parse(text: &str) -> Result<DecoratedComplex, FormatError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| FormatError::Parse(e.to_string()))?;
    if doc.format != FORMAT_TAG {
        return Err(FormatError::Parse(format!(
            "format is {:?}, expected {FORMAT_TAG:?}",
            doc.format
        )));
    }
    if doc.group.n != 3 {
        return Err(FormatError::Parse(format!("group n = {} is not supported, only 3", doc.group.n)));
    }
    let mut tets = Vec::with_capacity(doc.tetrahedra.len());
    for t in doc.tetrahedra {
        let orientation = Orientation::from_i64(t.orientation).ok_or_else(|| {
            flagvol_core::Error::Validation(format!(
                "tetrahedron {}: orientation {} is not +1 or -1",
                t.id, t.orientation
            ))
        })?;
        let payload = match t.decoration {
            DecorationDoc::Matrices { vertices } => {
                let g = vertices.map(|m| Mat3::from_rows(m.map(|row| row.map(c))));
                Payload::Matrices(Decoration::new(g).map_err(|e| tet_error(t.id, e))?)
            }
            DecorationDoc::Ptolemy { coords } => {
                let mut pairs = Vec::with_capacity(coords.len());
                for (k, v) in coords {
                    let tuple: PtolemyTuple = k.parse().map_err(|e| tet_error(t.id, e))?;
                    pairs.push((tuple, c(v)));
                }
                Payload::Ptolemy(PtolemyCoordinates::from_pairs(pairs).map_err(|e| tet_error(t.id, e))?)
            }
        };
        tets.push(Tetrahedron { id: t.id, orientation, payload });
    }
    let gluings = doc
        .gluings
        .into_iter()
        .map(|g| Gluing {
            a: FaceRef { tet: g.tets[0], face: g.faces[0] },
            b: FaceRef { tet: g.tets[1], face: g.faces[1] },
            vertex_map: g.vertex_map,
        })
        .collect();
    Ok(DecoratedComplex::new(tets, gluings)?)
}

fn tet_error(id: i64, e: flagvol_core::Error) -> flagvol_core::Error {
    flagvol_core::Error::Tetrahedron { id, source: Box::new(e) }
}

/// Serializes a complex; `parse(&serialize(c))` reproduces `c` exactly.
pub fn serialize(c: &DecoratedComplex) -> String {
    let doc = Document {
        format: FORMAT_TAG.to_string(),
        group: Group { n: 3 },
        tetrahedra: c
            .tetrahedra()
            .iter()
            .map(|t| TetDoc {
                id: t.id,
                orientation: t.orientation.as_i8() as i64,
                decoration: match &t.payload {
                    Payload::Matrices(d) => DecorationDoc::Matrices {
                        vertices: d.matrices().map(|m| m.rows.map(|row| row.map(pair))),
                    },
                    Payload::Ptolemy(p) => DecorationDoc::Ptolemy {
                        coords: p.iter().map(|(t, v)| (t.to_string(), pair(v))).collect(),
                    },
                },
            })
            .collect(),
        gluings: c
            .gluings()
            .iter()
            .map(|g| GluingDoc { tets: [g.a.tet, g.b.tet], faces: [g.a.face, g.b.face], vertex_map: g.vertex_map })
            .collect(),
    };
    // a document built from finite values always serializes
    let mut s = serde_json::to_string_pretty(&doc).unwrap_or_default();
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use flagvol_core::ptolemy::ptolemy_all;
    use flagvol_core::triangulation::{gen_boundary_4simplex, gen_random_single};

    #[test]
    fn round_trip_is_exact() {
        for c in [gen_boundary_4simplex(4).unwrap(), gen_random_single(9).unwrap()] {
            let text = serialize(&c);
            assert_eq!(parse(&text).unwrap(), c);
            assert_eq!(serialize(&parse(&text).unwrap()), text);
        }
    }

    #[test]
    fn ptolemy_round_trip() {
        let single = gen_random_single(3).unwrap();
        let coords = ptolemy_all(single.tetrahedra()[0].decoration().unwrap()).unwrap();
        let t = Tetrahedron { id: 5, orientation: Orientation::Negative, payload: Payload::Ptolemy(coords) };
        let c = DecoratedComplex::new(vec![t], vec![]).unwrap();
        let text = serialize(&c);
        assert!(text.contains("\"type\": \"ptolemy\""));
        assert_eq!(parse(&text).unwrap(), c);
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = serialize(&gen_random_single(1).unwrap()).replacen("\"group\"", "\"extra\": 1,\n  \"group\"", 1);
        assert!(matches!(parse(&text), Err(FormatError::Parse(_))));
        let text = serialize(&gen_random_single(1).unwrap()).replacen("\"orientation\"", "\"colour\": 2, \"orientation\"", 1);
        assert!(matches!(parse(&text), Err(FormatError::Parse(_))));
    }

    #[test]
    fn wrong_tag_and_garbage_are_parse_errors() {
        let text = serialize(&gen_random_single(1).unwrap()).replace(FORMAT_TAG, "decorated-triangulation/v2");
        assert!(matches!(parse(&text), Err(FormatError::Parse(_))));
        assert!(matches!(parse("{"), Err(FormatError::Parse(_))));
        assert!(matches!(parse("[]"), Err(FormatError::Parse(_))));
    }

    #[test]
    fn structural_problems_are_invalid() {
        let text = serialize(&gen_random_single(1).unwrap()).replace("\"orientation\": 1", "\"orientation\": 2");
        assert!(matches!(parse(&text), Err(FormatError::Invalid(_))));
        let mut c = serialize(&gen_boundary_4simplex(1).unwrap());
        c = c.replacen("\"faces\": [\n        0,", "\"faces\": [\n        7,", 1);
        assert!(matches!(parse(&c), Err(FormatError::Invalid(_))), "{c}");
    }
}
