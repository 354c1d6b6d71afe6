//! Representative functions on a finite groupoid, two ways, and the
//! comparison between them.
//!
//! The concrete model takes the total algebra to be all functions on arrows,
//! `k^{𝒢₁}` in its delta basis over the base `k^{𝒢₀}`, with source and
//! target pullbacks, evaluation at identities as the counit, inverse
//! pullback as the antipode, and the comultiplication dual to composition.
//! The coend model presents the same object by generators and relations from
//! a tensor-closed family of representations, with the evaluation map ζ
//! carrying a class `φ ⊗ s` to the function `g ↦ φ(ϱ_g s)`. This module
//! builds both, verifies the Hopf axioms and every identity ζ satisfies, and
//! derives the structural consequences: functoriality in the groupoid,
//! isotropy quotients and base changes, the decomposition of a transitive
//! groupoid into a band, and the flatness facts controlling when the whole
//! contraption is an honest Galois-type correspondence.

use crate::coend::{
    saturate_family, CoendBasisElem, CoendError, CoendModel, SparseRow, DEFAULT_AMBIENT_BUDGET,
    DEFAULT_TENSOR_DEPTH,
};
use crate::field::{FieldSpec, Scalar};
use crate::groupoid::{
    band_groupoid, connected_components, isotropy_group, loops_subgroupoid, validate_morphism,
    FiniteGroupoid, GroupoidError, GroupoidMorphism, MorphismViolation,
};
use crate::hopf::{
    check_hopf_axioms, tensor_over_base, validate_hopf_morphism, FiniteAlgebra, Grading,
    HopfAlgebroid, HopfError, HopfMorphism, HopfReport, SplitAlgebra,
};
use crate::matrix::Matrix;
use crate::rep::{restrict_along, spanning_family, RepError, SpanningFamily};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

pub const DEFAULT_ZETA_SAMPLES: usize = 100;

#[derive(Error, Debug)]
pub enum RepFunError {
    #[error("{0}")]
    Hopf(#[from] HopfError),
    #[error("{0}")]
    Coend(#[from] CoendError),
    #[error("{0}")]
    Rep(#[from] RepError),
    #[error("{0}")]
    Groupoid(#[from] GroupoidError),
    #[error("the groupoid is not transitive; object components: {components:?}")]
    NotTransitive { components: Vec<Vec<usize>> },
}

// ---------------------------------------------------------------------------
// The concrete model: functions on arrows
// ---------------------------------------------------------------------------

/// The Hopf algebroid of all functions on the arrows of a finite groupoid:
/// `k^{𝒢₁}` over `k^{𝒢₀}`, delta bases on both sides.
pub fn repfun_concrete(
    g: &Arc<FiniteGroupoid>,
    field: FieldSpec,
) -> Result<Arc<HopfAlgebroid>, HopfError> {
    let n = g.n_objects();
    let m = g.n_arrows();
    let one = field.one();
    let zero = field.zero();
    let indicator = |p: bool| if p { one.clone() } else { zero.clone() };

    let base = SplitAlgebra::new(g.object_names().to_vec(), field);
    let total =
        FiniteAlgebra::split(field, (0..m).map(|a| g.arrow(a).name.clone()).collect());
    let grading =
        Grading { base_dim: n, grades: (0..m).map(|a| (g.tgt(a), g.src(a))).collect() };

    // η_s(δ_x) = δ_x ∘ s and η_t(δ_x) = δ_x ∘ t, as indicator functions
    let source = Matrix::from_fn(field, m, n, |a, x| indicator(g.src(a) == x));
    let target = Matrix::from_fn(field, m, n, |a, x| indicator(g.tgt(a) == x));
    // ε(F) = F restricted along the identities
    let counit = Matrix::from_fn(field, n, m, |x, a| indicator(g.identity(x) == a));
    // S(F) = F ∘ inverse
    let antipode = Matrix::from_fn(field, m, m, |a, b| indicator(g.inverse(b) == a));
    // Δ(δ_h) sums the composable pairs multiplying to h
    let pairs = tensor_over_base(&grading, &grading)?;
    let comult = Matrix::from_fn(field, pairs.len(), m, |p, h| {
        let (i, j) = pairs.pairs[p];
        indicator(g.compose(i, j) == Some(h))
    });

    HopfAlgebroid::new(base, total, grading, source, target, counit, antipode, comult)
        .map(Arc::new)
}

// ---------------------------------------------------------------------------
// The combined model
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct RepFunOptions {
    /// how many tensor factors the family is closed under
    pub depth: usize,
    /// cap on the coend's ambient dimension
    pub ambient_budget: usize,
}

impl Default for RepFunOptions {
    fn default() -> RepFunOptions {
        RepFunOptions { depth: DEFAULT_TENSOR_DEPTH, ambient_budget: DEFAULT_AMBIENT_BUDGET }
    }
}

/// Both presentations of the representative functions of one groupoid,
/// joined by the evaluation matrix ζ from coend classes to functions.
pub struct RepFunAlgebroid {
    pub groupoid: Arc<FiniteGroupoid>,
    pub field: FieldSpec,
    pub concrete: Arc<HopfAlgebroid>,
    pub family: SpanningFamily,
    pub coend: CoendModel,
    /// `|𝒢₁| × dim(coend)`, columns are ζ of the quotient basis classes
    pub zeta: Matrix,
}

pub fn repfun(
    g: &Arc<FiniteGroupoid>,
    field: FieldSpec,
    options: RepFunOptions,
) -> Result<RepFunAlgebroid, RepFunError> {
    let concrete = repfun_concrete(g, field)?;
    let family = spanning_family(g, field);
    let members = saturate_family(g, field, &family.reps, options.depth);
    let coend = CoendModel::build(g, field, members, options.ambient_budget)?;
    let zeta = coend.zeta_matrix();
    Ok(RepFunAlgebroid { groupoid: g.clone(), field, concrete, family, coend, zeta })
}

// ---------------------------------------------------------------------------
// The ζ report: kernel, image, and the structural identities
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, serde::Serialize)]
pub struct ZetaReport {
    /// dimension of the concrete model, `|𝒢₁|`
    pub total_dim: usize,
    pub quotient_dim: usize,
    pub image_dim: usize,
    pub kernel_dim: usize,
    /// ζ of the unit class is the constant function 1
    pub unital: bool,
    /// ζ turns coend products into pointwise products
    pub multiplicative: bool,
    /// ζ of a class graded `(x, y)` is supported on arrows `y → x`
    pub base_bilinear: bool,
    /// pulling ζ back along the identities recovers the coend counit
    pub counit_identity: bool,
    /// ζ after the coend antipode equals ζ precomposed with inversion
    pub antipode_identity: bool,
    /// ζ on a composite expands through the middle leg of the class
    pub comultiplication_identity: bool,
    pub random_samples: usize,
    pub failures: Vec<String>,
}

impl ZetaReport {
    pub fn ok(&self) -> bool {
        self.kernel_dim == 0
            && self.image_dim == self.quotient_dim
            && self.unital
            && self.multiplicative
            && self.base_bilinear
            && self.counit_identity
            && self.antipode_identity
            && self.comultiplication_identity
    }
}

const FAILURE_CAP: usize = 8;

fn record(failures: &mut Vec<String>, flag: &mut bool, message: String) {
    *flag = false;
    if failures.len() < FAILURE_CAP {
        failures.push(message);
    }
}

/// Checks every identity ζ must satisfy: on the whole quotient basis, and on
/// `samples` pseudorandom coend elements drawn from the given seed.
pub fn zeta_report(r: &RepFunAlgebroid, samples: usize, seed: u64) -> ZetaReport {
    let g = &r.groupoid;
    let field = r.field;
    let m = g.n_arrows();
    let dim = r.coend.dim();
    let one = field.one();

    let mut report = ZetaReport {
        total_dim: m,
        quotient_dim: dim,
        image_dim: r.zeta.rank(),
        kernel_dim: r.zeta.kernel_basis().cols(),
        unital: true,
        multiplicative: true,
        base_bilinear: true,
        counit_identity: true,
        antipode_identity: true,
        comultiplication_identity: true,
        random_samples: 0,
        failures: Vec::new(),
    };
    let failures = &mut report.failures;

    // ζ value of one ambient basis element at one arrow
    let zeta_at = |e: &CoendBasisElem, a: usize| -> Scalar {
        if g.tgt(a) == e.tgt && g.src(a) == e.src {
            r.coend.members[e.member].matrix(a).get(e.row, e.col).clone()
        } else {
            field.zero()
        }
    };

    // unit
    let unit_image = r.zeta.apply(&r.coend.unit_class());
    if unit_image != vec![one.clone(); m] {
        record(failures, &mut report.unital, "ζ(1) is not the constant function 1".into());
    }

    // multiplicativity and bilinearity on the quotient basis
    let columns: Vec<Vec<Scalar>> =
        (0..dim).map(|k| r.zeta.column(k)).collect();
    for a in 0..dim {
        for b in 0..dim {
            match r.coend.mult_basis(a, b) {
                Ok(prod) => {
                    let lhs = r.zeta.apply(&prod);
                    let rhs: Vec<Scalar> = (0..m)
                        .map(|arrow| columns[a][arrow].mul(&columns[b][arrow]))
                        .collect();
                    if lhs != rhs {
                        record(
                            failures,
                            &mut report.multiplicative,
                            format!("ζ(e{a}·e{b}) differs from ζ(e{a})·ζ(e{b})"),
                        );
                    }
                }
                Err(e) => record(
                    failures,
                    &mut report.multiplicative,
                    format!("product of basis classes {a} and {b} unavailable: {e}"),
                ),
            }
        }
    }
    for (k, e) in r.coend.basis.iter().enumerate() {
        for arrow in 0..m {
            if !(g.tgt(arrow) == e.tgt && g.src(arrow) == e.src)
                && !columns[k][arrow].is_zero()
            {
                record(
                    failures,
                    &mut report.base_bilinear,
                    format!("ζ(e{k}) leaks outside its grading block at arrow {arrow}"),
                );
            }
        }
    }

    // identity (1): pulling back along identities is the counit
    for (k, e) in r.coend.basis.iter().enumerate() {
        let eps = r.coend.counit_of_elem(e);
        for x in 0..g.n_objects() {
            if columns[k][g.identity(x)] != eps[x] {
                record(
                    failures,
                    &mut report.counit_identity,
                    format!("ζ(e{k}) at the identity of object {x} differs from ε(e{k})"),
                );
            }
        }
    }

    // identity (2): ζ ∘ S = ζ ∘ (precompose with inversion)
    let antipode_classes: Vec<Vec<Scalar>> = r
        .coend
        .basis
        .iter()
        .map(|e| {
            let se = r.coend.antipode_of_elem(e);
            let col = r.coend.local_col(se.member, se.row, se.col);
            r.coend.class_of(&[(se.tgt, se.src, vec![(col, one.clone())])])
        })
        .collect();
    for k in 0..dim {
        let lhs = r.zeta.apply(&antipode_classes[k]);
        for arrow in 0..m {
            if lhs[arrow] != columns[k][g.inverse(arrow)] {
                record(
                    failures,
                    &mut report.antipode_identity,
                    format!("ζ(S e{k}) at arrow {arrow} differs from ζ(e{k}) at its inverse"),
                );
            }
        }
    }

    // identity (3): ζ(e)(g∘f) = Σ_l ζ(e with middle leg l)(g) · ζ(... l ...)(f)
    let composable = g.composable_pairs();
    let mut expansion = vec![vec![field.zero(); dim]; composable.len()];
    for (p, &(gg, ff)) in composable.iter().enumerate() {
        let z = g.src(gg);
        for (k, e) in r.coend.basis.iter().enumerate() {
            let rank = r.coend.members[e.member].rank();
            let mut acc = field.zero();
            for l in 0..rank {
                let left = CoendBasisElem { member: e.member, tgt: e.tgt, row: e.row, src: z, col: l };
                let right =
                    CoendBasisElem { member: e.member, tgt: z, row: l, src: e.src, col: e.col };
                acc = acc.add(&zeta_at(&left, gg).mul(&zeta_at(&right, ff)));
            }
            expansion[p][k] = acc;
        }
    }
    for (p, &(gg, ff)) in composable.iter().enumerate() {
        let composite = g.compose(gg, ff).expect("listed pairs compose");
        for k in 0..dim {
            if columns[k][composite] != expansion[p][k] {
                record(
                    failures,
                    &mut report.comultiplication_identity,
                    format!("ζ(e{k}) at the composite of pair {p} misses its expansion"),
                );
            }
        }
    }

    // the same identities on pseudorandom elements, through independent paths
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for sample in 0..samples {
        let u: Vec<Scalar> =
            (0..dim).map(|_| field.from_i64(rng.gen_range(-9..=9))).collect();
        let w = r.zeta.apply(&u);

        // (1)
        for x in 0..g.n_objects() {
            let mut eps = field.zero();
            for (k, e) in r.coend.basis.iter().enumerate() {
                eps = eps.add(&u[k].mul(&r.coend.counit_of_elem(e)[x]));
            }
            if w[g.identity(x)] != eps {
                record(
                    failures,
                    &mut report.counit_identity,
                    format!("sample {sample}: counit identity fails at object {x}"),
                );
            }
        }

        // (2)
        let mut su = vec![field.zero(); dim];
        for k in 0..dim {
            if u[k].is_zero() {
                continue;
            }
            for (j, c) in antipode_classes[k].iter().enumerate() {
                su[j] = su[j].add(&u[k].mul(c));
            }
        }
        let ws = r.zeta.apply(&su);
        for arrow in 0..m {
            if ws[arrow] != w[g.inverse(arrow)] {
                record(
                    failures,
                    &mut report.antipode_identity,
                    format!("sample {sample}: antipode identity fails at arrow {arrow}"),
                );
            }
        }

        // (3)
        for (p, &(gg, ff)) in composable.iter().enumerate() {
            let composite = g.compose(gg, ff).expect("listed pairs compose");
            let mut rhs = field.zero();
            for k in 0..dim {
                if !u[k].is_zero() {
                    rhs = rhs.add(&u[k].mul(&expansion[p][k]));
                }
            }
            if w[composite] != rhs {
                record(
                    failures,
                    &mut report.comultiplication_identity,
                    format!("sample {sample}: comultiplication identity fails at pair {p}"),
                );
            }
        }

        report.random_samples += 1;
    }

    report
}

// ---------------------------------------------------------------------------
// Functoriality: groupoid morphisms act on representative functions
// ---------------------------------------------------------------------------

/// The Hopf morphism `ℛ(cod φ) → ℛ(dom φ)` induced by precomposition with a
/// groupoid morphism φ. Pass the two concrete models so composites can share
/// them.
pub fn repfun_on_morphism(
    phi: &GroupoidMorphism,
    repfun_of_cod: &Arc<HopfAlgebroid>,
    repfun_of_dom: &Arc<HopfAlgebroid>,
) -> HopfMorphism {
    let field = repfun_of_cod.field();
    let one = field.one();
    let zero = field.zero();
    let base_map = Matrix::from_fn(
        field,
        phi.dom.n_objects(),
        phi.cod.n_objects(),
        |x, u| if phi.object_map[x] == u { one.clone() } else { zero.clone() },
    );
    let total_map = Matrix::from_fn(
        field,
        phi.dom.n_arrows(),
        phi.cod.n_arrows(),
        |a, h| if phi.arrow_map[a] == h { one.clone() } else { zero.clone() },
    );
    HopfMorphism {
        dom: repfun_of_cod.clone(),
        cod: repfun_of_dom.clone(),
        base_map,
        total_map,
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct NaturalityReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl NaturalityReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// ζ is natural in the groupoid: for a morphism `φ: 𝒢 → ℋ` and a coend
/// class of ℋ, restricting the class's representation along φ and then
/// evaluating agrees with evaluating over ℋ and pulling the function back.
/// Both sides are computed on the nose, one through restricted matrices and
/// one through ζ of ℋ.
pub fn coend_naturality(
    phi: &GroupoidMorphism,
    coend_of_cod: &CoendModel,
) -> Result<NaturalityReport, RepFunError> {
    let gd = &phi.dom;
    let field = coend_of_cod.field;
    let mut failures = Vec::new();
    let mut checked = 0;

    let restricted: Vec<crate::rep::Representation> = coend_of_cod
        .members
        .iter()
        .map(|member| restrict_along(phi, member))
        .collect::<Result<_, _>>()?;

    for (k, e) in coend_of_cod.basis.iter().enumerate() {
        let zeta_h = coend_of_cod.zeta_of_basis_elem_checked(e);
        for a in 0..gd.n_arrows() {
            let lhs = if phi.object_map[gd.tgt(a)] == e.tgt
                && phi.object_map[gd.src(a)] == e.src
            {
                restricted[e.member].matrix(a).get(e.row, e.col).clone()
            } else {
                field.zero()
            };
            let rhs = zeta_h[phi.arrow_map[a]].clone();
            checked += 1;
            if lhs != rhs {
                if failures.len() < FAILURE_CAP {
                    failures.push(format!(
                        "class {k} at arrow {a}: restriction path and pullback path disagree"
                    ));
                }
            }
        }
    }
    Ok(NaturalityReport { checked, failures })
}

// ---------------------------------------------------------------------------
// Isotropy: the quotient onto the loop subgroupoid
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct IsotropyQuotient {
    pub subgroupoid: Arc<FiniteGroupoid>,
    pub inclusion: GroupoidMorphism,
    /// restriction of functions from all arrows to the loops
    pub projection: HopfMorphism,
    pub projection_violations: Vec<String>,
    pub kernel_rank: usize,
    pub ideal_rank: usize,
    pub combined_rank: usize,
    /// the kernel of the restriction is exactly the ideal generated by the
    /// differences `η_s(b) − η_t(b)` over base elements b
    pub kernel_equals_ideal: bool,
}

pub fn isotropy_quotient(
    g: &Arc<FiniteGroupoid>,
    field: FieldSpec,
) -> Result<IsotropyQuotient, RepFunError> {
    let (sub, inclusion) = loops_subgroupoid(g)?;
    let big = repfun_concrete(g, field)?;
    let small = repfun_concrete(&sub, field)?;
    let projection = repfun_on_morphism(&inclusion, &big, &small);
    let projection_violations = validate_hopf_morphism(&projection);

    let m = g.n_arrows();
    let kernel = projection.total_map.kernel_basis();

    // the ideal generated by η_s(δ_x) − η_t(δ_x): since the total algebra is
    // split, the ideal is spanned by the products of the generators with the
    // delta basis
    let mut generators: Vec<Vec<Scalar>> = Vec::new();
    for x in 0..g.n_objects() {
        let mut delta = vec![field.zero(); g.n_objects()];
        delta[x] = field.one();
        let w: Vec<Scalar> = big
            .eta_s(&delta)
            .into_iter()
            .zip(big.eta_t(&delta))
            .map(|(s, t)| s.sub(&t))
            .collect();
        for a in 0..m {
            let mut prod = vec![field.zero(); m];
            prod[a] = w[a].clone();
            generators.push(prod);
        }
    }
    let ideal = Matrix::from_columns(field, m, generators);
    let kernel_rank = kernel.rank();
    let ideal_rank = ideal.rank();
    let combined_rank = kernel.hstack(&ideal).rank();
    let kernel_equals_ideal = kernel_rank == ideal_rank && combined_rank == kernel_rank;

    Ok(IsotropyQuotient {
        subgroupoid: sub,
        inclusion,
        projection,
        projection_violations,
        kernel_rank,
        ideal_rank,
        combined_rank,
        kernel_equals_ideal,
    })
}

// ---------------------------------------------------------------------------
// Isotropy: base change to one object
// ---------------------------------------------------------------------------

/// Base change of a split-total Hopf algebroid along evaluation at one
/// object: keep only the coordinates graded `(x, x)`. The result is a Hopf
/// algebra over the one-point base.
pub fn base_change_block(h: &HopfAlgebroid, x: usize) -> Result<Arc<HopfAlgebroid>, HopfError> {
    let field = h.field();
    if x >= h.base_dim() {
        return Err(HopfError::Shape(format!(
            "object {x} out of range for a base of dimension {}",
            h.base_dim()
        )));
    }
    let block: Vec<usize> = (0..h.dim()).filter(|&i| h.grading.grades[i] == (x, x)).collect();
    let d = block.len();

    // the antipode must preserve the block for the restriction to make sense
    for &i in &block {
        for r in 0..h.dim() {
            if !h.antipode.get(r, i).is_zero() && !block.contains(&r) {
                return Err(HopfError::Shape(format!(
                    "antipode carries block coordinate {i} outside the block (to {r})"
                )));
            }
        }
    }

    let base = SplitAlgebra::new(vec![h.base.names[x].clone()], field);
    let total =
        FiniteAlgebra::split(field, block.iter().map(|&i| h.total.names[i].clone()).collect());
    let grading = Grading { base_dim: 1, grades: vec![(0, 0); d] };
    let ones = Matrix::from_fn(field, d, 1, |_, _| field.one());
    let counit = Matrix::from_fn(field, 1, d, |_, c| h.counit.get(x, block[c]).clone());
    let antipode =
        Matrix::from_fn(field, d, d, |r, c| h.antipode.get(block[r], block[c]).clone());
    // over a one-point base every pair is balanced, in lex order — project
    // the big comultiplication to block rows; components through other
    // objects vanish because their legs are not graded `(x, x)`
    let comult = Matrix::from_fn(field, d * d, d, |p, c| {
        let (bi, bj) = (block[p / d], block[p % d]);
        let row = h.pairs.index[&(bi, bj)];
        h.comult.get(row, block[c]).clone()
    });

    HopfAlgebroid::new(base, total, grading, ones.clone(), ones, counit, antipode, comult)
        .map(Arc::new)
}

#[derive(Debug)]
pub struct IsotropyComparison {
    pub object: usize,
    /// the `(x, x)` block of the big algebroid, as a Hopf algebra
    pub block: Arc<HopfAlgebroid>,
    /// the representative functions of the isotropy group at x
    pub group_hopf: Arc<HopfAlgebroid>,
    /// base change followed by the identification of block coordinates with
    /// loops
    pub comparison: HopfMorphism,
    pub comparison_violations: Vec<String>,
    pub bijective: bool,
    pub block_axioms: HopfReport,
}

impl IsotropyComparison {
    pub fn ok(&self) -> bool {
        self.comparison_violations.is_empty() && self.bijective && self.block_axioms.ok()
    }
}

/// Base-changing the representative functions to one object recovers the
/// representative functions of the isotropy group there, for every finite
/// groupoid — connected or not.
pub fn isotropy_hopf_algebra(
    g: &Arc<FiniteGroupoid>,
    x: usize,
    field: FieldSpec,
) -> Result<IsotropyComparison, RepFunError> {
    let big = repfun_concrete(g, field)?;
    let block = base_change_block(&big, x)?;
    let (group, _inclusion) = isotropy_group(g, x)?;
    let group_hopf = repfun_concrete(&group, field)?;

    // both sides list the loops at x in ascending arrow order
    let d = block.dim();
    if d != group_hopf.dim() {
        return Err(RepFunError::Hopf(HopfError::Shape(format!(
            "block has {d} coordinates but the isotropy group has {} loops",
            group_hopf.dim()
        ))));
    }
    let comparison = HopfMorphism {
        dom: block.clone(),
        cod: group_hopf.clone(),
        base_map: Matrix::identity(field, 1),
        total_map: Matrix::identity(field, d),
    };
    let comparison_violations = validate_hopf_morphism(&comparison);
    let bijective = comparison.is_bijective();
    let block_axioms = check_hopf_axioms(&block);

    Ok(IsotropyComparison {
        object: x,
        block,
        group_hopf,
        comparison,
        comparison_violations,
        bijective,
        block_axioms,
    })
}

// ---------------------------------------------------------------------------
// Transitive groupoids are bands
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct TransitiveDecomposition {
    /// the band groupoid on the same objects over the isotropy group at the
    /// chosen base point
    pub band: Arc<FiniteGroupoid>,
    /// `a ↦ (tgt a, τ_{tgt a} ∘ a ∘ τ_{src a}⁻¹, src a)`
    pub to_band: GroupoidMorphism,
    pub morphism_violations: Vec<MorphismViolation>,
    /// the induced identification of representative functions
    pub hopf_iso: HopfMorphism,
    pub hopf_violations: Vec<String>,
    pub bijective: bool,
}

impl TransitiveDecomposition {
    pub fn ok(&self) -> bool {
        self.morphism_violations.is_empty() && self.hopf_violations.is_empty() && self.bijective
    }
}

/// Splits a transitive groupoid as a band over its isotropy group at `x`,
/// and verifies the induced map on representative functions is a Hopf
/// isomorphism. Non-transitive input is rejected with its component list.
pub fn transitive_decomposition(
    g: &Arc<FiniteGroupoid>,
    x: usize,
    field: FieldSpec,
) -> Result<TransitiveDecomposition, RepFunError> {
    if !g.is_transitive() {
        return Err(RepFunError::NotTransitive {
            components: connected_components(g).members,
        });
    }
    let n = g.n_objects();
    let m = g.n_arrows();
    let (group, _inclusion) = isotropy_group(g, x)?;
    let order = group.n_arrows();
    let loops = g.loops_at(x);
    let loop_index: BTreeMap<usize, usize> =
        loops.iter().enumerate().map(|(i, &a)| (a, i)).collect();

    // the smallest arrow into the base point, per object
    let tau: Vec<usize> = (0..n)
        .map(|y| {
            (0..m)
                .find(|&a| g.src(a) == y && g.tgt(a) == x)
                .expect("transitive groupoid joins every object to the base point")
        })
        .collect();

    let arrow_map: Vec<usize> = (0..m)
        .map(|a| {
            let into_base = g
                .compose(a, g.inverse(tau[g.src(a)]))
                .expect("arrow composes with the chosen path from the base point");
            let h = g
                .compose(tau[g.tgt(a)], into_base)
                .expect("the chosen path to the base point closes the loop");
            (g.tgt(a) * order + loop_index[&h]) * n + g.src(a)
        })
        .collect();

    let band = Arc::new(band_groupoid(n, &group)?);
    let to_band = GroupoidMorphism {
        dom: g.clone(),
        cod: band.clone(),
        object_map: (0..n).collect(),
        arrow_map,
    };
    let morphism_violations = validate_morphism(&to_band);

    let big = repfun_concrete(g, field)?;
    let band_hopf = repfun_concrete(&band, field)?;
    let hopf_iso = repfun_on_morphism(&to_band, &band_hopf, &big);
    let hopf_violations = validate_hopf_morphism(&hopf_iso);
    let bijective = to_band.is_bijective() && hopf_iso.is_bijective();

    Ok(TransitiveDecomposition {
        band,
        to_band,
        morphism_violations,
        hopf_iso,
        hopf_violations,
        bijective,
    })
}

// ---------------------------------------------------------------------------
// Flatness over the enveloping base
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, serde::Serialize)]
pub struct GtReport {
    /// the total algebra is projective over the enveloping base algebra
    pub projective: bool,
    /// no grading block is empty
    pub faithfully_flat: bool,
    pub empty_blocks: Vec<(String, String)>,
    pub note: String,
}

/// Reports whether the concrete model is projective and faithfully flat over
/// its enveloping base. Projectivity is automatic here — the enveloping base
/// is a finite product of copies of the field, so all its modules are
/// projective. Faithful flatness asks every grading summand to be nonzero,
/// which happens exactly when some arrow joins every ordered pair of
/// objects.
pub fn gt_check(h: &HopfAlgebroid) -> GtReport {
    let nb = h.base_dim();
    let mut inhabited = vec![false; nb * nb];
    for &(t, s) in &h.grading.grades {
        inhabited[t * nb + s] = true;
    }
    let empty_blocks: Vec<(String, String)> = (0..nb)
        .flat_map(|t| (0..nb).map(move |s| (t, s)))
        .filter(|&(t, s)| !inhabited[t * nb + s])
        .map(|(t, s)| (h.base.names[t].clone(), h.base.names[s].clone()))
        .collect();
    let faithfully_flat = empty_blocks.is_empty();
    let note = if faithfully_flat {
        "projective because the enveloping base splits; every grading block inhabited, \
         so the extension is faithfully flat"
            .to_string()
    } else {
        format!(
            "projective because the enveloping base splits; {} empty grading block(s) \
             keep the extension from being faithfully flat",
            empty_blocks.len()
        )
    };
    GtReport { projective: true, faithfully_flat, empty_blocks, note }
}

impl CoendModel {
    /// ζ of one basis element as a full function on arrows, going through
    /// [`CoendModel::zeta_of_elem`]; split out so callers outside this crate
    /// read naturally.
    pub fn zeta_of_basis_elem_checked(&self, e: &CoendBasisElem) -> Vec<Scalar> {
        self.zeta_of_elem(e)
    }

    /// The class of `1 ⊗ δ_y` from the trivial summand.
    pub fn trivial_class_source(&self, y: usize) -> Vec<Scalar> {
        let n = self.groupoid.n_objects();
        let parts: Vec<(usize, usize, SparseRow)> = (0..n)
            .map(|x| (x, y, vec![(self.local_col(0, 0, 0), self.field.one())]))
            .collect();
        self.class_of(&parts)
    }

    /// The class of `δ_x ⊗ 1` from the trivial summand.
    pub fn trivial_class_target(&self, x: usize) -> Vec<Scalar> {
        let n = self.groupoid.n_objects();
        let parts: Vec<(usize, usize, SparseRow)> = (0..n)
            .map(|y| (x, y, vec![(self.local_col(0, 0, 0), self.field.one())]))
            .collect();
        self.class_of(&parts)
    }
}
