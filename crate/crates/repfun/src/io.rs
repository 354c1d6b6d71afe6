//! JSON file formats for groupoids, representations, and Hopf algebroid
//! dumps.
//!
//! Scalars serialize as strings — `"5"` or `"2/3"` for rationals, `"4 mod 5"`
//! for prime fields — and matrices as row-major nested arrays of those
//! strings. Name-keyed maps use ordered maps and every list is written in a
//! canonical order, so saving is deterministic and dumps round-trip
//! bit-exactly: parse then re-save reproduces the file.
//!
//! Formats:
//! - groupoid: `{"objects", "arrows": [{"id", "src", "tgt"}], "compose":
//!   [[g, f, gf]], "identity": {object: arrow}, "inverse": {arrow: arrow}}`,
//!   all by name; the compose list holds exactly the composable pairs.
//! - representation: `{"groupoid": <inline or path>, "field", "rank",
//!   "matrices": {arrowName: [[scalar]]}}`.
//! - Hopf algebroid: base and total basis names, unit, multiplication
//!   table, grading, and the five structure maps as matrices.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::field::{FieldError, FieldSpec, Scalar};
use crate::groupoid::{Arrow, FiniteGroupoid, GroupoidError};
use crate::hopf::{FiniteAlgebra, Grading, HopfAlgebroid, HopfError, MultTable, SplitAlgebra};
use crate::matrix::Matrix;
use crate::rep::{RepError, Representation};
use crate::report::canonical_json;

#[derive(thiserror::Error, Debug)]
pub enum IoError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    File(#[from] std::io::Error),
    #[error("{0}")]
    Field(#[from] FieldError),
    #[error("{0}")]
    Groupoid(#[from] GroupoidError),
    #[error("{0}")]
    Rep(#[from] RepError),
    #[error("{0}")]
    Hopf(#[from] HopfError),
    #[error("malformed file: {0}")]
    Format(String),
}

fn fail(msg: impl Into<String>) -> IoError {
    IoError::Format(msg.into())
}

// ---------------------------------------------------------------------------
// Scalar and matrix helpers
// ---------------------------------------------------------------------------

fn scalars_to_strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn scalars_from_strings(field: FieldSpec, v: &[String]) -> Result<Vec<Scalar>, IoError> {
    v.iter().map(|s| Ok(field.parse(s)?)).collect()
}

pub fn matrix_to_strings(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c).to_string()).collect())
        .collect()
}

/// Rebuild a matrix from row-major scalar strings. The column count is
/// taken from the first row (`cols` supplies it for zero-row matrices) and
/// every row must match it.
pub fn matrix_from_strings(
    field: FieldSpec,
    rows: &[Vec<String>],
    cols: usize,
) -> Result<Matrix, IoError> {
    let width = rows.first().map_or(cols, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(fail("ragged matrix: rows have different lengths"));
    }
    let parsed: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|r| scalars_from_strings(field, r))
        .collect::<Result<_, _>>()?;
    Ok(Matrix::from_fn(field, rows.len(), width, |r, c| parsed[r][c].clone()))
}

// ---------------------------------------------------------------------------
// Groupoid files
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ArrowFile {
    id: String,
    src: String,
    tgt: String,
}

#[derive(Serialize, Deserialize)]
struct GroupoidFile {
    objects: Vec<String>,
    arrows: Vec<ArrowFile>,
    /// exactly the composable pairs, as `[g, f, g∘f]` by arrow name
    compose: Vec<[String; 3]>,
    identity: BTreeMap<String, String>,
    inverse: BTreeMap<String, String>,
}

/// A name → dense-id lookup that rejects duplicates and unknown names.
struct NameIndex<'a> {
    kind: &'a str,
    index: BTreeMap<&'a str, usize>,
}

impl<'a> NameIndex<'a> {
    fn new(kind: &'a str, names: impl Iterator<Item = &'a str>) -> Result<NameIndex<'a>, IoError> {
        let mut index = BTreeMap::new();
        for (i, name) in names.enumerate() {
            if index.insert(name, i).is_some() {
                return Err(fail(format!("duplicate {kind} name {name:?}")));
            }
        }
        Ok(NameIndex { kind, index })
    }

    fn get(&self, name: &str) -> Result<usize, IoError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| fail(format!("unknown {} name {:?}", self.kind, name)))
    }
}

fn groupoid_file(g: &FiniteGroupoid) -> GroupoidFile {
    let name = |a: usize| g.arrow(a).name.clone();
    let mut compose = Vec::new();
    for left in 0..g.n_arrows() {
        for right in 0..g.n_arrows() {
            if let Some(out) = g.compose(left, right) {
                compose.push([name(left), name(right), name(out)]);
            }
        }
    }
    GroupoidFile {
        objects: g.object_names().to_vec(),
        arrows: g
            .arrows()
            .iter()
            .map(|a| ArrowFile {
                id: a.name.clone(),
                src: g.object_names()[a.src].clone(),
                tgt: g.object_names()[a.tgt].clone(),
            })
            .collect(),
        compose,
        identity: (0..g.n_objects())
            .map(|x| (g.object_names()[x].clone(), name(g.identity(x))))
            .collect(),
        inverse: (0..g.n_arrows()).map(|a| (name(a), name(g.inverse(a)))).collect(),
    }
}

fn groupoid_from_file(f: &GroupoidFile) -> Result<FiniteGroupoid, IoError> {
    let objects = NameIndex::new("object", f.objects.iter().map(String::as_str))?;
    let arrows = NameIndex::new("arrow", f.arrows.iter().map(|a| a.id.as_str()))?;

    let arrow_table: Vec<Arrow> = f
        .arrows
        .iter()
        .map(|a| {
            Ok(Arrow { name: a.id.clone(), src: objects.get(&a.src)?, tgt: objects.get(&a.tgt)? })
        })
        .collect::<Result<_, IoError>>()?;

    let compose_entries: Vec<(usize, usize, usize)> = f
        .compose
        .iter()
        .map(|[g, h, gh]| Ok((arrows.get(g)?, arrows.get(h)?, arrows.get(gh)?)))
        .collect::<Result<_, IoError>>()?;

    let mut identity = vec![usize::MAX; f.objects.len()];
    for (obj, arr) in &f.identity {
        identity[objects.get(obj)?] = arrows.get(arr)?;
    }
    if let Some(x) = identity.iter().position(|&a| a == usize::MAX) {
        return Err(fail(format!("object {:?} has no identity entry", f.objects[x])));
    }

    let mut inverse = vec![usize::MAX; f.arrows.len()];
    for (arr, inv) in &f.inverse {
        inverse[arrows.get(arr)?] = arrows.get(inv)?;
    }
    if let Some(a) = inverse.iter().position(|&b| b == usize::MAX) {
        return Err(fail(format!("arrow {:?} has no inverse entry", f.arrows[a].id)));
    }

    Ok(FiniteGroupoid::new(f.objects.clone(), arrow_table, compose_entries, identity, inverse)?)
}

pub fn groupoid_to_json(g: &FiniteGroupoid) -> String {
    canonical_json(&groupoid_file(g))
}

pub fn groupoid_from_json(text: &str) -> Result<Arc<FiniteGroupoid>, IoError> {
    let f: GroupoidFile = serde_json::from_str(text)?;
    Ok(Arc::new(groupoid_from_file(&f)?))
}

// ---------------------------------------------------------------------------
// Representation files
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GroupoidRef {
    Inline(GroupoidFile),
    Path(String),
}

#[derive(Serialize, Deserialize)]
struct RepresentationFile {
    groupoid: GroupoidRef,
    field: String,
    rank: usize,
    matrices: BTreeMap<String, Vec<Vec<String>>>,
}

/// Serialize with the groupoid inlined, matrices keyed by arrow name.
pub fn representation_to_json(e: &Representation) -> String {
    let g = e.groupoid();
    let file = RepresentationFile {
        groupoid: GroupoidRef::Inline(groupoid_file(g)),
        field: e.field().name(),
        rank: e.rank(),
        matrices: (0..g.n_arrows())
            .map(|a| (g.arrow(a).name.clone(), matrix_to_strings(e.matrix(a))))
            .collect(),
    };
    canonical_json(&file)
}

/// Parse a representation file. A `"groupoid"` given as a path string is
/// read relative to `base_dir`.
pub fn representation_from_json(
    text: &str,
    base_dir: Option<&Path>,
) -> Result<Representation, IoError> {
    let file: RepresentationFile = serde_json::from_str(text)?;
    let groupoid = match &file.groupoid {
        GroupoidRef::Inline(f) => Arc::new(groupoid_from_file(f)?),
        GroupoidRef::Path(p) => {
            let path = match base_dir {
                Some(dir) => dir.join(p),
                None => Path::new(p).to_path_buf(),
            };
            load_groupoid(&path)?
        }
    };
    let field = FieldSpec::from_name(&file.field)?;
    let matrices = (0..groupoid.n_arrows())
        .map(|a| {
            let name = &groupoid.arrow(a).name;
            let rows = file
                .matrices
                .get(name)
                .ok_or_else(|| fail(format!("no matrix for arrow {name:?}")))?;
            matrix_from_strings(field, rows, file.rank)
        })
        .collect::<Result<Vec<_>, _>>()?;
    if file.matrices.len() != groupoid.n_arrows() {
        return Err(fail(format!(
            "{} matrices for {} arrows",
            file.matrices.len(),
            groupoid.n_arrows()
        )));
    }
    Ok(Representation::new(groupoid, field, file.rank, matrices)?)
}

// ---------------------------------------------------------------------------
// Hopf algebroid dumps
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
enum MultFile {
    #[serde(rename = "split")]
    Split,
    #[serde(rename = "dense")]
    Dense(Vec<Vec<Vec<String>>>),
}

#[derive(Serialize, Deserialize)]
struct HopfFile {
    field: String,
    base: Vec<String>,
    total: Vec<String>,
    unit: Vec<String>,
    mult: MultFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    split_witness: Option<Vec<Vec<String>>>,
    /// per total-basis element: `[target grade, source grade]`
    grading: Vec<[usize; 2]>,
    source: Vec<Vec<String>>,
    target: Vec<Vec<String>>,
    counit: Vec<Vec<String>>,
    antipode: Vec<Vec<String>>,
    comult: Vec<Vec<String>>,
}

pub fn hopf_to_json(h: &HopfAlgebroid) -> String {
    let mult = match &h.total.mult {
        MultTable::Split => MultFile::Split,
        MultTable::Dense(t) => MultFile::Dense(
            t.iter().map(|row| row.iter().map(|v| scalars_to_strings(v)).collect()).collect(),
        ),
    };
    let file = HopfFile {
        field: h.field().name(),
        base: h.base.names.clone(),
        total: h.total.names.clone(),
        unit: scalars_to_strings(&h.total.unit),
        mult,
        split_witness: h
            .total
            .split_witness
            .as_ref()
            .map(|w| w.iter().map(|v| scalars_to_strings(v)).collect()),
        grading: h.grading.grades.iter().map(|&(t, s)| [t, s]).collect(),
        source: matrix_to_strings(&h.source),
        target: matrix_to_strings(&h.target),
        counit: matrix_to_strings(&h.counit),
        antipode: matrix_to_strings(&h.antipode),
        comult: matrix_to_strings(&h.comult),
    };
    canonical_json(&file)
}

pub fn hopf_from_json(text: &str) -> Result<Arc<HopfAlgebroid>, IoError> {
    let file: HopfFile = serde_json::from_str(text)?;
    let field = FieldSpec::from_name(&file.field)?;
    let nb = file.base.len();
    let nh = file.total.len();

    let mult = match &file.mult {
        MultFile::Split => MultTable::Split,
        MultFile::Dense(t) => MultTable::Dense(
            t.iter()
                .map(|row| {
                    row.iter().map(|v| scalars_from_strings(field, v)).collect::<Result<_, _>>()
                })
                .collect::<Result<_, _>>()?,
        ),
    };
    let split_witness = file
        .split_witness
        .as_ref()
        .map(|w| w.iter().map(|v| scalars_from_strings(field, v)).collect::<Result<_, _>>())
        .transpose()?;
    let base = SplitAlgebra::new(file.base.clone(), field);
    let total = FiniteAlgebra {
        field,
        names: file.total.clone(),
        unit: scalars_from_strings(field, &file.unit)?,
        mult,
        split_witness,
    };
    let grading =
        Grading { base_dim: nb, grades: file.grading.iter().map(|&[t, s]| (t, s)).collect() };
    Ok(Arc::new(HopfAlgebroid::new(
        base,
        total,
        grading,
        matrix_from_strings(field, &file.source, nb)?,
        matrix_from_strings(field, &file.target, nb)?,
        matrix_from_strings(field, &file.counit, nh)?,
        matrix_from_strings(field, &file.antipode, nh)?,
        matrix_from_strings(field, &file.comult, nh)?,
    )?))
}

// ---------------------------------------------------------------------------
// Files on disk, and input-kind detection
// ---------------------------------------------------------------------------

/// What a JSON input file describes, judged by its distinctive keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Groupoid,
    Representation,
    Hopf,
}

pub fn detect_kind(text: &str) -> Result<InputKind, IoError> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    let obj = v.as_object().ok_or_else(|| fail("top level is not a JSON object"))?;
    if obj.contains_key("comult") {
        Ok(InputKind::Hopf)
    } else if obj.contains_key("matrices") {
        Ok(InputKind::Representation)
    } else if obj.contains_key("compose") {
        Ok(InputKind::Groupoid)
    } else {
        Err(fail(
            "cannot tell what kind of file this is (expected a \"compose\", \"matrices\", \
             or \"comult\" key)",
        ))
    }
}

pub fn load_groupoid(path: &Path) -> Result<Arc<FiniteGroupoid>, IoError> {
    groupoid_from_json(&std::fs::read_to_string(path)?)
}

pub fn load_representation(path: &Path) -> Result<Representation, IoError> {
    representation_from_json(&std::fs::read_to_string(path)?, path.parent())
}

pub fn load_hopf(path: &Path) -> Result<Arc<HopfAlgebroid>, IoError> {
    hopf_from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{band_groupoid, cyclic_group, disjoint_union, pair_groupoid};
    use crate::rep::{spanning_family, validate_rep};
    use crate::repfun::repfun_concrete;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    fn f5() -> FieldSpec {
        FieldSpec::Prime(5)
    }

    #[test]
    fn groupoid_files_round_trip() {
        let corpus = [
            Arc::new(pair_groupoid(3)),
            Arc::new(band_groupoid(2, &cyclic_group(2)).unwrap()),
            Arc::new(disjoint_union(&pair_groupoid(2), &cyclic_group(2))),
        ];
        for g in corpus {
            let json = groupoid_to_json(&g);
            let back = groupoid_from_json(&json).unwrap();
            assert_eq!(*back, *g);
            assert_eq!(groupoid_to_json(&back), json, "re-saving must reproduce the bytes");
        }
    }

    #[test]
    fn representation_files_round_trip() {
        let band = Arc::new(band_groupoid(2, &cyclic_group(2)).unwrap());
        for field in [q(), f5()] {
            let e = spanning_family(&band, field).reps[0].clone();
            let json = representation_to_json(&e);
            let back = representation_from_json(&json, None).unwrap();
            assert_eq!(back, *e);
            assert!(validate_rep(&back).violations.is_empty());
            assert_eq!(representation_to_json(&back), json);
        }
    }

    #[test]
    fn representation_files_can_point_at_a_groupoid_file() {
        let dir = std::env::temp_dir().join("repfun-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let g = Arc::new(pair_groupoid(2));
        std::fs::write(dir.join("pair2.json"), groupoid_to_json(&g)).unwrap();

        let e = spanning_family(&g, q()).reps[0].clone();
        let inline = representation_to_json(&e);
        let by_path = inline.replace(
            &serde_json::to_string_pretty(&groupoid_file(&g))
                .unwrap()
                .replace('\n', "\n  "),
            "\"pair2.json\"",
        );
        assert!(by_path.contains("\"pair2.json\""), "surgery on the JSON failed");
        let back = representation_from_json(&by_path, Some(&dir)).unwrap();
        assert_eq!(back, *e);
    }

    #[test]
    fn hopf_dumps_round_trip_bit_exactly() {
        for (g, field) in [
            (Arc::new(pair_groupoid(2)), q()),
            (Arc::new(band_groupoid(2, &cyclic_group(2)).unwrap()), f5()),
        ] {
            let h = repfun_concrete(&g, field).unwrap();
            let json = hopf_to_json(&h);
            let back = hopf_from_json(&json).unwrap();
            assert_eq!(hopf_to_json(&back), json);
            assert_eq!(back.base.names, h.base.names);
            assert_eq!(back.total.names, h.total.names);
            assert_eq!(back.grading.grades, h.grading.grades);
            assert_eq!(back.source, h.source);
            assert_eq!(back.target, h.target);
            assert_eq!(back.counit, h.counit);
            assert_eq!(back.antipode, h.antipode);
            assert_eq!(back.comult, h.comult);
        }
    }

    #[test]
    fn malformed_files_are_rejected_with_reasons() {
        let g = Arc::new(pair_groupoid(2));
        let json = groupoid_to_json(&g);

        let unknown_name = json.replace("\"tgt\": \"x1\"", "\"tgt\": \"x9\"");
        assert!(matches!(
            groupoid_from_json(&unknown_name).unwrap_err(),
            IoError::Format(msg) if msg.contains("x9")
        ));

        let not_json = "{ objects: [";
        assert!(matches!(groupoid_from_json(not_json).unwrap_err(), IoError::Json(_)));

        let e = spanning_family(&g, q()).reps[0].clone();
        let rep_json = representation_to_json(&e);
        let bad_scalar = rep_json.replace("\"1\"", "\"one\"");
        assert!(matches!(
            representation_from_json(&bad_scalar, None).unwrap_err(),
            IoError::Field(_)
        ));

        let h = repfun_concrete(&g, q()).unwrap();
        let dump = hopf_to_json(&h);
        let bad_field = dump.replace("\"rational\"", "\"real\"");
        assert!(matches!(hopf_from_json(&bad_field).unwrap_err(), IoError::Field(_)));
    }

    #[test]
    fn input_kinds_are_detected_by_shape() {
        let g = Arc::new(pair_groupoid(2));
        assert_eq!(detect_kind(&groupoid_to_json(&g)).unwrap(), InputKind::Groupoid);
        let e = spanning_family(&g, q()).reps[0].clone();
        assert_eq!(
            detect_kind(&representation_to_json(&e)).unwrap(),
            InputKind::Representation
        );
        let h = repfun_concrete(&g, q()).unwrap();
        assert_eq!(detect_kind(&hopf_to_json(&h)).unwrap(), InputKind::Hopf);
        assert!(detect_kind("{\"x\": 1}").is_err());
        assert!(detect_kind("[1, 2]").is_err());
    }
}
