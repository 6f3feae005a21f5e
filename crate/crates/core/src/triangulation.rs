//! Decorated complexes: tetrahedra carrying decorations or Ptolemy
//! coordinates, glued along faces.
//!
//! A face is named by the vertex it omits (`0..4`). A gluing pairs a face of
//! tetrahedron A with a face of tetrahedron B; `vertex_map[i]` is the vertex of
//! B matched with the `i`-th vertex (ascending) of A's face.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::flags::{bfg_parameters, face_positions};
use crate::ptolemy::{coset_equivalent, gtz_flattenings, ptolemy_all, Decoration, PtolemyCoordinates};
use crate::rng::Sampler;
use crate::{Error, Result};

/// Attempts a generator makes before giving up.
pub const MAX_RETRIES: u32 = 32;

/// Orientation sign of a tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `+1`.
    Positive,
    /// `-1`.
    Negative,
}

impl Orientation {
    /// `+1.0` or `-1.0`.
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    /// `+1` or `-1`.
    pub fn as_i8(self) -> i8 {
        match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }

    /// Parses `+1` / `-1`.
    pub fn from_i64(v: i64) -> Option<Self> {
        match v {
            1 => Some(Orientation::Positive),
            -1 => Some(Orientation::Negative),
            _ => None,
        }
    }
}

/// What a tetrahedron carries.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    /// Four determinant-one matrices, taken modulo `N`.
    Matrices(Decoration),
    /// Precomputed Ptolemy coordinates.
    Ptolemy(PtolemyCoordinates),
}

/// One tetrahedron of a complex.
#[derive(Debug, Clone, PartialEq)]
pub struct Tetrahedron {
    /// Identifier, unique in the complex.
    pub id: i64,
    /// Sign applied to every contribution of this tetrahedron.
    pub orientation: Orientation,
    /// Decoration data.
    pub payload: Payload,
}

impl Tetrahedron {
    /// The matrix decoration, if present.
    pub fn decoration(&self) -> Option<&Decoration> {
        match &self.payload {
            Payload::Matrices(d) => Some(d),
            Payload::Ptolemy(_) => None,
        }
    }
}

/// A face of a tetrahedron, named by the omitted vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceRef {
    /// Tetrahedron id.
    pub tet: i64,
    /// Omitted vertex, `0..4`.
    pub face: u8,
}

/// A face pairing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gluing {
    /// Side A.
    pub a: FaceRef,
    /// Side B.
    pub b: FaceRef,
    /// Image in B of A's face vertices (ascending).
    pub vertex_map: [u8; 3],
}

impl Gluing {
    /// Matched vertex pairs `(vertex of A, vertex of B)`.
    pub fn vertex_pairs(&self) -> [(usize, usize); 3] {
        let src = face_positions(self.a.face as usize);
        [0, 1, 2].map(|i| (src[i], self.vertex_map[i] as usize))
    }
}

/// A validated decorated complex.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoratedComplex {
    tetrahedra: Vec<Tetrahedron>,
    gluings: Vec<Gluing>,
}

impl DecoratedComplex {
    /// Validates ids and gluings.
    pub fn new(tetrahedra: Vec<Tetrahedron>, gluings: Vec<Gluing>) -> Result<Self> {
        let mut ids = BTreeMap::new();
        for (pos, t) in tetrahedra.iter().enumerate() {
            if ids.insert(t.id, pos).is_some() {
                return Err(Error::Validation(format!("duplicate tetrahedron id {}", t.id)));
            }
        }
        let mut used = BTreeMap::new();
        for (gi, g) in gluings.iter().enumerate() {
            for side in [g.a, g.b] {
                if !ids.contains_key(&side.tet) {
                    return Err(Error::Validation(format!(
                        "gluing {gi}: unknown tetrahedron {}",
                        side.tet
                    )));
                }
                if side.face > 3 {
                    return Err(Error::Validation(format!(
                        "gluing {gi}: face {} of tetrahedron {} out of range",
                        side.face, side.tet
                    )));
                }
                if let Some(prev) = used.insert(side, gi) {
                    return Err(Error::Validation(format!(
                        "gluing {gi}: face {} of tetrahedron {} already glued by gluing {prev}",
                        side.face, side.tet
                    )));
                }
            }
            let target = face_positions(g.b.face as usize);
            let mut hit = [false; 4];
            for &v in &g.vertex_map {
                if v > 3 || !target.contains(&(v as usize)) || hit[v as usize] {
                    return Err(Error::Validation(format!(
                        "gluing {gi}: vertex map {:?} is not a bijection onto face {} of tetrahedron {}",
                        g.vertex_map, g.b.face, g.b.tet
                    )));
                }
                hit[v as usize] = true;
            }
        }
        Ok(DecoratedComplex { tetrahedra, gluings })
    }

    /// Tetrahedra in input order.
    pub fn tetrahedra(&self) -> &[Tetrahedron] {
        &self.tetrahedra
    }

    /// Gluings in input order.
    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }

    /// Tetrahedron with the given id.
    pub fn tetrahedron(&self, id: i64) -> Option<&Tetrahedron> {
        self.tetrahedra.iter().find(|t| t.id == id)
    }

    /// Tetrahedra sorted by id; sums over the complex use this order.
    pub fn sorted_tetrahedra(&self) -> Vec<&Tetrahedron> {
        let mut v: Vec<&Tetrahedron> = self.tetrahedra.iter().collect();
        v.sort_by_key(|t| t.id);
        v
    }

    /// Faces not covered by any gluing, sorted.
    pub fn unglued_faces(&self) -> Vec<FaceRef> {
        let mut glued: Vec<FaceRef> = self.gluings.iter().flat_map(|g| [g.a, g.b]).collect();
        glued.sort();
        let mut out = Vec::new();
        for t in self.sorted_tetrahedra() {
            for face in 0..4u8 {
                let f = FaceRef { tet: t.id, face };
                if glued.binary_search(&f).is_err() {
                    out.push(f);
                }
            }
        }
        out
    }

    /// Every face is glued.
    pub fn is_closed(&self) -> bool {
        self.unglued_faces().is_empty()
    }

    /// True when every tetrahedron carries matrices.
    pub fn has_matrix_payloads(&self) -> bool {
        self.tetrahedra.iter().all(|t| t.decoration().is_some())
    }

    /// Rebuilds the complex with every decoration replaced by `f(decoration)`.
    pub fn map_decorations<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&Decoration) -> Result<Decoration>,
    {
        let mut tets = self.tetrahedra.clone();
        for t in tets.iter_mut() {
            let d = match &t.payload {
                Payload::Matrices(d) => f(d).map_err(|e| e.at_tet(t.id))?,
                Payload::Ptolemy(_) => return Err(Error::PtolemyPayload(t.id)),
            };
            t.payload = Payload::Matrices(d);
        }
        DecoratedComplex::new(tets, self.gluings.clone())
    }
}

/// A failed coset comparison across a gluing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CosetViolation {
    /// Index of the gluing.
    pub gluing: usize,
    /// Vertex on side A.
    pub a: (i64, usize),
    /// Vertex on side B.
    pub b: (i64, usize),
}

/// Outcome of [`check_decoration_consistency`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConsistencyReport {
    /// Number of matched vertex pairs compared.
    pub checked: usize,
    /// Pairs whose matrices are not in the same `N`-coset.
    pub violations: Vec<CosetViolation>,
}

impl ConsistencyReport {
    /// No violations.
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares cosets of matched vertices across every gluing.
pub fn check_decoration_consistency(c: &DecoratedComplex) -> Result<ConsistencyReport> {
    let mut report = ConsistencyReport::default();
    for (gi, g) in c.gluings.iter().enumerate() {
        let da = decoration_of(c, g.a.tet)?;
        let db = decoration_of(c, g.b.tet)?;
        for (va, vb) in g.vertex_pairs() {
            report.checked += 1;
            if !coset_equivalent(da.matrix(va), db.matrix(vb)) {
                report.violations.push(CosetViolation { gluing: gi, a: (g.a.tet, va), b: (g.b.tet, vb) });
            }
        }
    }
    Ok(report)
}

fn decoration_of(c: &DecoratedComplex, id: i64) -> Result<&Decoration> {
    let t = c
        .tetrahedron(id)
        .ok_or_else(|| Error::Validation(format!("unknown tetrahedron {id}")))?;
    t.decoration().ok_or(Error::PtolemyPayload(id))
}

/// Whether every invariant of the crate can be evaluated on `d`.
pub fn is_usable(d: &Decoration) -> bool {
    let Ok(coords) = ptolemy_all(d) else {
        return false;
    };
    let Ok(flags) = d.flags() else {
        return false;
    };
    gtz_flattenings(&coords).is_ok() && bfg_parameters(&flags).is_ok() && flags.dual().is_ok()
}

/// Five tetrahedra on shared random matrices `G₀..G₄`: tetrahedron `i` omits
/// `Gᵢ`, has orientation `(-1)ⁱ`, and its faces are glued to the other four.
pub fn gen_boundary_4simplex(seed: u64) -> Result<DecoratedComplex> {
    let mut sampler = Sampler::new(seed);
    for _ in 0..MAX_RETRIES {
        let g = [0; 5].map(|_| sampler.sl3());
        let mut tets = Vec::with_capacity(5);
        let mut ok = true;
        for i in 0..5usize {
            let labels = labels_without(i);
            let d = Decoration::new(labels.map(|l| g[l]))?;
            ok &= is_usable(&d);
            let orientation = if i % 2 == 0 { Orientation::Positive } else { Orientation::Negative };
            tets.push(Tetrahedron { id: i as i64, orientation, payload: Payload::Matrices(d) });
        }
        if !ok {
            continue;
        }
        let mut gluings = Vec::with_capacity(10);
        for i in 0..5usize {
            for j in i + 1..5 {
                let li = labels_without(i);
                let lj = labels_without(j);
                let face_i = position(&li, j);
                let face_j = position(&lj, i);
                let vertex_map = face_positions(face_i).map(|p| position(&lj, li[p]) as u8);
                gluings.push(Gluing {
                    a: FaceRef { tet: i as i64, face: face_i as u8 },
                    b: FaceRef { tet: j as i64, face: face_j as u8 },
                    vertex_map,
                });
            }
        }
        return DecoratedComplex::new(tets, gluings);
    }
    Err(Error::RetriesExhausted(MAX_RETRIES))
}

fn labels_without(i: usize) -> [usize; 4] {
    let mut out = [0; 4];
    let mut n = 0;
    for l in 0..5 {
        if l != i && n < 4 {
            out[n] = l;
            n += 1;
        }
    }
    out
}

fn position(labels: &[usize; 4], label: usize) -> usize {
    labels.iter().position(|&l| l == label).unwrap_or(usize::MAX)
}

/// One positively oriented tetrahedron with four random matrices, resampled
/// until every invariant is defined.
pub fn gen_random_single(seed: u64) -> Result<DecoratedComplex> {
    let mut sampler = Sampler::new(seed);
    for _ in 0..MAX_RETRIES {
        let d = Decoration::new([0; 4].map(|_| sampler.sl3()))?;
        if is_usable(&d) {
            let t = Tetrahedron { id: 0, orientation: Orientation::Positive, payload: Payload::Matrices(d) };
            return DecoratedComplex::new(alloc::vec![t], Vec::new());
        }
    }
    Err(Error::RetriesExhausted(MAX_RETRIES))
}
