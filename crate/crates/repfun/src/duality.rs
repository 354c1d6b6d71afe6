//! The two comparison maps between finite groupoids and their function
//! algebroids, and the machine checks that they invert each other.
//!
//! For a finite groupoid 𝒢 with function model ℛ(𝒢) = (k^{𝒢₀}, k^{𝒢₁}),
//! [`theta`] builds the canonical functor 𝒢 → 𝒳(ℛ(𝒢)) into the character
//! groupoid: objects go to evaluation characters of the base, arrows to
//! evaluation characters of the total algebra. In the other direction,
//! [`omega`] builds, for any split Hopf algebroid (R, H), the morphism
//! (R, H) → ℛ(𝒳(R, H)) sending an element to its evaluation function on
//! characters.
//!
//! [`triangle_one`] and [`triangle_two`] compose the two maps in both orders
//! and compare the composites with identities, exactly. On top of those,
//! [`duality_bijection_check`] enumerates a whole hom-set of groupoid
//! morphisms and exhibits the bijection
//! Hom(𝒢, 𝒳(R, H)) ≅ Hom((R, H), ℛ(𝒢)) by round-tripping every element.
//!
//! The bridge between representations and comodules runs through
//! [`comodule_from_rep`] (matrix-coefficient coaction on the global sections
//! of a representation) and [`f_functor`] (a comodule becomes a
//! representation of the character groupoid by evaluating the coaction's
//! function entries at each character). [`omega_coend_oracle`] uses that
//! bridge to re-derive ω on a basis by an independent route and compare.

use std::sync::Arc;

use crate::field::{FieldSpec, Scalar};
use crate::groupoid::{
    enumerate_morphisms, validate_morphism, FiniteGroupoid, GroupoidMorphism, MorphismViolation,
};
use crate::hopf::{
    apply_x_on_morphism, character_groupoid, find_functional, validate_comodule,
    validate_hopf_morphism, CharacterGroupoid, Comodule, HopfAlgebroid, HopfError, HopfMorphism,
};
use crate::matrix::Matrix;
use crate::rep::Representation;
use crate::repfun::{
    gt_check, repfun_concrete, repfun_on_morphism, NaturalityReport, RepFunAlgebroid, RepFunError,
};

/// Cap on recorded witnesses per report; failures beyond it are counted by
/// the boolean flags but not listed.
const WITNESS_CAP: usize = 8;

fn note(witnesses: &mut Vec<String>, msg: String) {
    if witnesses.len() < WITNESS_CAP {
        witnesses.push(msg);
    }
}

fn delta_vec(field: FieldSpec, len: usize, idx: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); len];
    v[idx] = field.one();
    v
}

fn dot(field: FieldSpec, u: &[Scalar], v: &[Scalar]) -> Scalar {
    let mut acc = field.zero();
    for (a, b) in u.iter().zip(v) {
        if !a.is_zero() && !b.is_zero() {
            acc = acc.add(&a.mul(b));
        }
    }
    acc
}

fn is_permutation_onto(map: &[usize], n: usize) -> bool {
    if map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    map.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

/// Record how `m` differs from the identity matrix, if it does.
fn identity_witness(tag: &str, m: &Matrix, witnesses: &mut Vec<String>) {
    if m.rows() != m.cols() {
        note(witnesses, format!("{tag} is {}×{}, not square", m.rows(), m.cols()));
        return;
    }
    if m.is_identity() {
        return;
    }
    'scan: for r in 0..m.rows() {
        for c in 0..m.cols() {
            let e = m.get(r, c);
            let ok = if r == c { e.is_one() } else { e.is_zero() };
            if !ok {
                note(witnesses, format!("{tag} differs from the identity at ({r}, {c})"));
                break 'scan;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Θ: a groupoid inside the characters of its function algebroid
// ---------------------------------------------------------------------------

/// The canonical functor from a groupoid into the character groupoid of its
/// function model, with its verification results.
///
/// The object part sends an object to the character of the base algebra that
/// evaluates functions at that object; the arrow part sends an arrow to the
/// character of the total algebra that evaluates representative functions at
/// that arrow. Functoriality of the arrow part is a real theorem — the
/// composition law of the character groupoid is read off the
/// comultiplication, so [`validate_morphism`] re-derives the fact that
/// evaluation intertwines composition with Δ.
pub struct ThetaMorphism {
    /// 𝒳(ℛ(𝒢)), the character groupoid of the function model.
    pub characters: CharacterGroupoid,
    /// The functor 𝒢 → `characters.groupoid`.
    pub morphism: GroupoidMorphism,
    /// Functoriality violations (empty when the functor laws hold exactly).
    pub violations: Vec<MorphismViolation>,
    pub bijective_on_objects: bool,
    pub bijective_on_arrows: bool,
}

impl ThetaMorphism {
    /// Functorial and bijective on objects and arrows.
    pub fn is_isomorphism(&self) -> bool {
        self.violations.is_empty() && self.bijective_on_objects && self.bijective_on_arrows
    }
}

/// The evaluation functor into the character groupoid `x` of the function
/// model `h` of `g`. Fails if some evaluation functional is missing from the
/// character lists, which would mean `h` is not the function model of `g`.
fn evaluation_maps(
    g: &Arc<FiniteGroupoid>,
    h: &Arc<HopfAlgebroid>,
    x: &CharacterGroupoid,
) -> Result<GroupoidMorphism, RepFunError> {
    let field = h.field();
    if h.base_dim() != g.n_objects() || h.dim() != g.n_arrows() {
        return Err(RepFunError::Hopf(HopfError::Shape(format!(
            "expected the function model of a groupoid with {} objects and {} arrows, \
             found base dimension {} and total dimension {}",
            g.n_objects(),
            g.n_arrows(),
            h.base_dim(),
            h.dim(),
        ))));
    }
    let object_map = (0..g.n_objects())
        .map(|obj| {
            let ev = delta_vec(field, g.n_objects(), obj);
            find_functional(&x.object_chars, &ev).ok_or_else(|| {
                RepFunError::Hopf(HopfError::CharacterStructure(format!(
                    "evaluation at object {obj} is not among the base characters"
                )))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let arrow_map = (0..g.n_arrows())
        .map(|a| {
            let ev = delta_vec(field, g.n_arrows(), a);
            find_functional(&x.arrow_chars, &ev).ok_or_else(|| {
                RepFunError::Hopf(HopfError::CharacterStructure(format!(
                    "evaluation at arrow {a} is not among the total characters"
                )))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroupoidMorphism {
        dom: g.clone(),
        cod: x.groupoid.clone(),
        object_map,
        arrow_map,
    })
}

/// Build Θ for `g` over `field`, constructing the function model internally.
pub fn theta(g: &Arc<FiniteGroupoid>, field: FieldSpec) -> Result<ThetaMorphism, RepFunError> {
    let h = repfun_concrete(g, field)?;
    theta_for(g, &h)
}

/// Build Θ against an existing function model `h` of `g` (so callers holding
/// one do not rebuild it, and compositions stay on the same instance).
pub fn theta_for(
    g: &Arc<FiniteGroupoid>,
    h: &Arc<HopfAlgebroid>,
) -> Result<ThetaMorphism, RepFunError> {
    let x = character_groupoid(h)?;
    let morphism = evaluation_maps(g, h, &x)?;
    let violations = validate_morphism(&morphism);
    let bijective_on_objects = is_permutation_onto(&morphism.object_map, x.groupoid.n_objects());
    let bijective_on_arrows = is_permutation_onto(&morphism.arrow_map, x.groupoid.n_arrows());
    Ok(ThetaMorphism {
        characters: x,
        morphism,
        violations,
        bijective_on_objects,
        bijective_on_arrows,
    })
}

// ---------------------------------------------------------------------------
// Comodules ↔ representations across the character groupoid
// ---------------------------------------------------------------------------

/// The comodule of global sections of a representation `e` over the function
/// model `h` of its groupoid.
///
/// The sections of a rank-d representation form a free module of rank d over
/// the base (a basis section per fiber coordinate), and the coaction lands a
/// basis section on the matrix-coefficient functions: the coaction entry at
/// (i, j) is the function g ↦ ϱ_g[i][j] on arrows. The counit law of the
/// result is the identity-arrow law of `e`, and coassociativity is exactly
/// its cocycle law, so [`validate_comodule`] accepts the output if and only
/// if `e` is a representation.
pub fn comodule_from_rep(
    e: &Representation,
    h: &Arc<HopfAlgebroid>,
) -> Result<Comodule, RepFunError> {
    let g = e.groupoid();
    if h.dim() != g.n_arrows() || h.base_dim() != g.n_objects() || h.field() != e.field() {
        return Err(RepFunError::Hopf(HopfError::Shape(
            "the Hopf algebroid is not the function model of the representation's groupoid"
                .into(),
        )));
    }
    let d = e.rank();
    let coaction = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..g.n_arrows()).map(|a| e.matrix(a).get(i, j).clone()).collect())
                .collect()
        })
        .collect();
    Ok(Comodule { hopf: h.clone(), rank: d, coaction })
}

/// Turn a comodule over a split Hopf algebroid into a representation of its
/// character groupoid `x`: the matrix of an arrow evaluates every coaction
/// entry (a total-algebra element) at that arrow's character. The identity
/// law comes from the comodule counit law, and the cocycle law from
/// coassociativity plus multiplicativity of characters.
///
/// `x` must be the character groupoid of `c.hopf`. Rejects invalid comodules.
pub fn f_functor(
    c: &Comodule,
    x: &CharacterGroupoid,
) -> Result<Representation, RepFunError> {
    let bad = validate_comodule(c);
    if let Some(first) = bad.first() {
        return Err(RepFunError::Hopf(HopfError::Shape(format!(
            "not a comodule ({} violations, first: {first:?})",
            bad.len()
        ))));
    }
    let field = c.hopf.field();
    let xg = &x.groupoid;
    let matrices = (0..xg.n_arrows())
        .map(|a| {
            Matrix::from_fn(field, c.rank, c.rank, |i, j| {
                dot(field, &x.arrow_chars[a], &c.coaction[i][j])
            })
        })
        .collect();
    Ok(Representation::new(xg.clone(), field, c.rank, matrices)?)
}

// ---------------------------------------------------------------------------
// Ω: a Hopf algebroid inside the functions on its characters
// ---------------------------------------------------------------------------

/// The evaluation morphism from a split Hopf algebroid to the function model
/// of its character groupoid, with its verification results.
pub struct OmegaMorphism {
    /// 𝒳(R, H), the character groupoid of the domain.
    pub characters: CharacterGroupoid,
    /// ℛ(𝒳(R, H)), the function model of the character groupoid.
    pub target: Arc<HopfAlgebroid>,
    /// The Hopf-algebroid morphism (R, H) → `target`: on the base, r ↦
    /// [β ↦ β(r)]; on the total algebra, h ↦ [χ ↦ χ(h)].
    pub morphism: HopfMorphism,
    /// Witnesses from [`validate_hopf_morphism`] (empty when all
    /// compatibilities hold exactly).
    pub violations: Vec<String>,
    pub bijective: bool,
}

impl OmegaMorphism {
    pub fn is_isomorphism(&self) -> bool {
        self.violations.is_empty() && self.bijective
    }
}

/// Build Ω for a split Hopf algebroid `h`. The maps are written in rows of
/// characters: the total part's matrix has one row per character of the
/// total algebra (so the image of an element is its evaluation function),
/// and likewise for the base part.
pub fn omega(h: &Arc<HopfAlgebroid>) -> Result<OmegaMorphism, RepFunError> {
    let field = h.field();
    let x = character_groupoid(h)?;
    let target = repfun_concrete(&x.groupoid, field)?;
    let base_map = Matrix::from_fn(field, x.object_chars.len(), h.base_dim(), |b, r| {
        x.object_chars[b][r].clone()
    });
    let total_map =
        Matrix::from_fn(field, x.arrow_chars.len(), h.dim(), |a, c| x.arrow_chars[a][c].clone());
    let morphism = HopfMorphism { dom: h.clone(), cod: target.clone(), base_map, total_map };
    let violations = validate_hopf_morphism(&morphism);
    let bijective = morphism.is_bijective();
    Ok(OmegaMorphism { characters: x, target, morphism, violations, bijective })
}

/// Independent re-derivation of Ω on a quotient basis of the coend model.
///
/// Route one (the implementation): apply Ω's total map to the function each
/// basis class represents. Route two (the oracle): turn every family member
/// into a comodule of matrix-coefficient functions, push it through
/// [`f_functor`] to a representation of the character groupoid, and read the
/// class's image as a matrix-coefficient function there — the entry of the
/// pushed representation at (row, col), cut down to the grading block that
/// the class's source and target objects select through Θ. The two routes
/// share no formulas: one evaluates characters on ζ-images, the other builds
/// matrices from the coaction and the character groupoid's endpoint
/// structure.
pub fn omega_coend_oracle(r: &RepFunAlgebroid) -> Result<NaturalityReport, RepFunError> {
    let h = &r.concrete;
    let field = r.field;
    let om = omega(h)?;
    let x = &om.characters;
    let xg = &x.groupoid;
    let th = evaluation_maps(&r.groupoid, h, x)?;

    let mut pushed = Vec::with_capacity(r.coend.members.len());
    for m in &r.coend.members {
        let c = comodule_from_rep(m, h)?;
        pushed.push(f_functor(&c, x)?);
    }

    let mut checked = 0usize;
    let mut failures = Vec::new();
    for (k, elem) in r.coend.basis.iter().enumerate() {
        let class_fn = r.zeta.column(k);
        let by_evaluation = om.morphism.total_map.apply(&class_fn);
        let t_char = th.object_map[elem.tgt];
        let s_char = th.object_map[elem.src];
        let rep = &pushed[elem.member];
        for a in 0..xg.n_arrows() {
            let by_coend = if xg.tgt(a) == t_char && xg.src(a) == s_char {
                rep.matrix(a).get(elem.row, elem.col).clone()
            } else {
                field.zero()
            };
            checked += 1;
            if by_evaluation[a] != by_coend {
                note(
                    &mut failures,
                    format!("class {k} disagrees between the two routes at character {a}"),
                );
            }
        }
    }
    Ok(NaturalityReport { checked, failures })
}

// ---------------------------------------------------------------------------
// Triangle identities
// ---------------------------------------------------------------------------

/// Outcome of one triangle check; `witnesses` locates the first few
/// discrepancies when it fails.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TriangleReport {
    pub pass: bool,
    pub witnesses: Vec<String>,
}

/// First triangle: on the function model of `g`, the composite
/// ℛ(Θ) ∘ Ω must be the identity of ℛ(𝒢). Ω re-expresses a function by its
/// values on characters; ℛ(Θ) pulls back along Θ; the round trip has to
/// restore every function on the nose.
pub fn triangle_one(
    g: &Arc<FiniteGroupoid>,
    field: FieldSpec,
) -> Result<TriangleReport, RepFunError> {
    let h = repfun_concrete(g, field)?;
    triangle_one_for(g, &h)
}

/// [`triangle_one`] against an existing function model of `g`.
pub fn triangle_one_for(
    g: &Arc<FiniteGroupoid>,
    h: &Arc<HopfAlgebroid>,
) -> Result<TriangleReport, RepFunError> {
    let om = omega(h)?;
    let th = evaluation_maps(g, h, &om.characters)?;
    let mut witnesses = Vec::new();
    for v in validate_morphism(&th) {
        note(&mut witnesses, format!("the evaluation functor is not functorial: {v:?}"));
    }
    for v in &om.violations {
        note(&mut witnesses, format!("the evaluation morphism breaks a law: {v}"));
    }
    let r_theta = repfun_on_morphism(&th, &om.target, h);
    let composite = om.morphism.then(&r_theta);
    identity_witness("the base composite", &composite.base_map, &mut witnesses);
    identity_witness("the total composite", &composite.total_map, &mut witnesses);
    Ok(TriangleReport { pass: witnesses.is_empty(), witnesses })
}

/// Second triangle: on the character groupoid of `h`, the composite
/// 𝒳(Ω) ∘ Θ must be the identity functor. Θ embeds the character groupoid
/// into the characters of its own function model; 𝒳(Ω) reads such a
/// character back through Ω; the round trip has to fix every object and
/// arrow.
pub fn triangle_two(h: &Arc<HopfAlgebroid>) -> Result<TriangleReport, RepFunError> {
    let om = omega(h)?;
    let xg = om.characters.groupoid.clone();
    let th = theta_for(&xg, &om.target)?;
    let mut witnesses = Vec::new();
    for v in &th.violations {
        note(&mut witnesses, format!("the evaluation functor is not functorial: {v:?}"));
    }
    for v in &om.violations {
        note(&mut witnesses, format!("the evaluation morphism breaks a law: {v}"));
    }
    let xk_omega = apply_x_on_morphism(&om.morphism, &th.characters, &om.characters)?;
    let composite = th.morphism.then(&xk_omega);
    for (obj, &img) in composite.object_map.iter().enumerate() {
        if img != obj {
            note(&mut witnesses, format!("object {obj} returns as {img}"));
        }
    }
    for (a, &img) in composite.arrow_map.iter().enumerate() {
        if img != a {
            note(&mut witnesses, format!("arrow {a} returns as {img}"));
        }
    }
    Ok(TriangleReport { pass: witnesses.is_empty(), witnesses })
}

// ---------------------------------------------------------------------------
// Naturality
// ---------------------------------------------------------------------------

/// Naturality of Θ in the groupoid: for `phi: 𝒢 → ℋ`, the square
/// 𝒳(ℛ(φ)) ∘ Θ_𝒢 = Θ_ℋ ∘ φ must commute as a table equality of functors.
pub fn theta_naturality(
    phi: &GroupoidMorphism,
    field: FieldSpec,
) -> Result<NaturalityReport, RepFunError> {
    let hg = repfun_concrete(&phi.dom, field)?;
    let hh = repfun_concrete(&phi.cod, field)?;
    let th_dom = theta_for(&phi.dom, &hg)?;
    let th_cod = theta_for(&phi.cod, &hh)?;
    let r_phi = repfun_on_morphism(phi, &hh, &hg);
    let x_r_phi = apply_x_on_morphism(&r_phi, &th_dom.characters, &th_cod.characters)?;
    let lhs = th_dom.morphism.then(&x_r_phi);
    let rhs = phi.then(&th_cod.morphism);

    let mut checked = 0usize;
    let mut failures = Vec::new();
    for (obj, (&l, r)) in lhs.object_map.iter().zip(&rhs.object_map).enumerate() {
        checked += 1;
        if l != *r {
            note(&mut failures, format!("object {obj}: {l} on one side, {r} on the other"));
        }
    }
    for (a, (&l, r)) in lhs.arrow_map.iter().zip(&rhs.arrow_map).enumerate() {
        checked += 1;
        if l != *r {
            note(&mut failures, format!("arrow {a}: {l} on one side, {r} on the other"));
        }
    }
    Ok(NaturalityReport { checked, failures })
}

/// Naturality of Ω in the Hopf algebroid: for `alpha: (R, H) → (S, K)`, the
/// square ℛ(𝒳(α)) ∘ Ω_{(R,H)} = Ω_{(S,K)} ∘ α must commute as a matrix
/// equality.
pub fn omega_naturality(alpha: &HopfMorphism) -> Result<NaturalityReport, RepFunError> {
    let om_dom = omega(&alpha.dom)?;
    let om_cod = omega(&alpha.cod)?;
    let x_alpha = apply_x_on_morphism(alpha, &om_cod.characters, &om_dom.characters)?;
    let r_x_alpha = repfun_on_morphism(&x_alpha, &om_dom.target, &om_cod.target);
    let lhs = om_dom.morphism.then(&r_x_alpha);
    let rhs = alpha.then(&om_cod.morphism);

    let mut checked = 0usize;
    let mut failures = Vec::new();
    let mut compare = |tag: &str, l: &Matrix, r: &Matrix| {
        for row in 0..l.rows() {
            for col in 0..l.cols() {
                checked += 1;
                if l.get(row, col) != r.get(row, col) {
                    note(&mut failures, format!("{tag} differs at ({row}, {col})"));
                }
            }
        }
    };
    compare("the base square", &lhs.base_map, &rhs.base_map);
    compare("the total square", &lhs.total_map, &rhs.total_map);
    Ok(NaturalityReport { checked, failures })
}

// ---------------------------------------------------------------------------
// The hom-set bijection
// ---------------------------------------------------------------------------

/// Result of round-tripping an entire hom-set through the two comparison
/// maps.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DualityBijectionReport {
    /// Number of groupoid morphisms `g → 𝒳(h)` found by enumeration.
    pub morphisms: usize,
    /// Every enumerated functor returns to itself under Φ ∘ Ψ.
    pub phi_after_psi_is_identity: bool,
    /// Every Hopf morphism in the image of Ψ returns to itself under Ψ ∘ Φ.
    pub psi_after_phi_fixes_image: bool,
    /// Ψ sends distinct functors to distinct Hopf morphisms.
    pub psi_injective: bool,
    /// Every Ψ-image satisfies the Hopf-morphism laws.
    pub images_are_hopf_morphisms: bool,
    pub failures: Vec<String>,
}

impl DualityBijectionReport {
    pub fn ok(&self) -> bool {
        self.phi_after_psi_is_identity
            && self.psi_after_phi_fixes_image
            && self.psi_injective
            && self.images_are_hopf_morphisms
    }
}

/// Exhibit the bijection Hom(𝒢, 𝒳(R, H)) ≅ Hom((R, H), ℛ(𝒢)).
///
/// Ψ sends a functor φ to ℛ(φ) ∘ Ω, and Φ sends a Hopf morphism α to
/// 𝒳(α) ∘ Θ. The groupoid side is enumerated exhaustively (the `guard`
/// bounds the domain's arrow count, as in [`enumerate_morphisms`]); each
/// functor is round-tripped through Φ ∘ Ψ, each image through Ψ ∘ Φ, and the
/// images are checked pairwise distinct and lawful. Together these verify
/// that Ψ is injective and — since Φ ∘ Ψ is the identity — that Φ is a
/// surjective left inverse, so the two hom-sets correspond one to one.
pub fn duality_bijection_check(
    h: &Arc<HopfAlgebroid>,
    g: &Arc<FiniteGroupoid>,
    guard: usize,
) -> Result<DualityBijectionReport, RepFunError> {
    let field = h.field();
    let om = omega(h)?;
    let hg = repfun_concrete(g, field)?;
    let th = theta_for(g, &hg)?;
    let all = enumerate_morphisms(g, &om.characters.groupoid, guard)?;

    let mut failures = Vec::new();
    let mut phi_after_psi_is_identity = true;
    let mut psi_after_phi_fixes_image = true;
    let mut images_are_hopf_morphisms = true;
    let mut images: Vec<HopfMorphism> = Vec::with_capacity(all.len());

    for (i, phi) in all.iter().enumerate() {
        let r_phi = repfun_on_morphism(phi, &om.target, &hg);
        let psi = om.morphism.then(&r_phi);
        if !validate_hopf_morphism(&psi).is_empty() {
            images_are_hopf_morphisms = false;
            note(&mut failures, format!("Ψ of functor {i} breaks a Hopf-morphism law"));
        }
        let x_psi = apply_x_on_morphism(&psi, &th.characters, &om.characters)?;
        let round = th.morphism.then(&x_psi);
        if round.object_map != phi.object_map || round.arrow_map != phi.arrow_map {
            phi_after_psi_is_identity = false;
            note(&mut failures, format!("functor {i} does not return to itself under Φ∘Ψ"));
        }
        let r_round = repfun_on_morphism(&round, &om.target, &hg);
        let psi_again = om.morphism.then(&r_round);
        if psi_again.base_map != psi.base_map || psi_again.total_map != psi.total_map {
            psi_after_phi_fixes_image = false;
            note(&mut failures, format!("Ψ∘Φ moves the Hopf morphism of functor {i}"));
        }
        images.push(psi);
    }

    let mut psi_injective = true;
    for i in 0..images.len() {
        for j in (i + 1)..images.len() {
            if images[i].base_map == images[j].base_map
                && images[i].total_map == images[j].total_map
            {
                psi_injective = false;
                note(&mut failures, format!("Ψ collides on functors {i} and {j}"));
            }
        }
    }

    Ok(DualityBijectionReport {
        morphisms: all.len(),
        phi_after_psi_is_identity,
        psi_after_phi_fixes_image,
        psi_injective,
        images_are_hopf_morphisms,
        failures,
    })
}

// ---------------------------------------------------------------------------
// Summary table
// ---------------------------------------------------------------------------

/// One row of the round-trip summary for a groupoid: sizes, whether Θ is an
/// isomorphism, both triangle identities, and the flatness diagnostics of
/// the function model.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RoundTripReport {
    pub objects: usize,
    pub arrows: usize,
    pub base_dim: usize,
    pub total_dim: usize,
    pub theta_iso: bool,
    pub triangle_one: bool,
    pub triangle_two: bool,
    pub projective: bool,
    pub faithfully_flat: bool,
    pub empty_blocks: Vec<(String, String)>,
}

/// Run the full round trip for one groupoid over one field.
pub fn round_trip(
    g: &Arc<FiniteGroupoid>,
    field: FieldSpec,
) -> Result<RoundTripReport, RepFunError> {
    let h = repfun_concrete(g, field)?;
    let th = theta_for(g, &h)?;
    let one = triangle_one_for(g, &h)?;
    let two = triangle_two(&h)?;
    let gt = gt_check(&h);
    Ok(RoundTripReport {
        objects: g.n_objects(),
        arrows: g.n_arrows(),
        base_dim: h.base_dim(),
        total_dim: h.dim(),
        theta_iso: th.is_isomorphism(),
        triangle_one: one.pass,
        triangle_two: two.pass,
        projective: gt.projective,
        faithfully_flat: gt.faithfully_flat,
        empty_blocks: gt.empty_blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{
        action_projection, band_automorphism, band_groupoid, cyclic_group, diagonal_embedding,
        disjoint_union, pair_groupoid, unit_groupoid, GroupoidError,
    };
    use crate::hopf::trivial_comodule;
    use crate::rep::{spanning_family, trivial_rep, validate_rep};
    use crate::repfun::{repfun, transitive_decomposition, RepFunOptions};

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    fn f5() -> FieldSpec {
        FieldSpec::Prime(5)
    }

    fn band2_z2() -> Arc<FiniteGroupoid> {
        Arc::new(band_groupoid(2, &cyclic_group(2)).unwrap())
    }

    fn corpus() -> Vec<(&'static str, Arc<FiniteGroupoid>)> {
        vec![
            ("unit(3)", Arc::new(unit_groupoid(3))),
            ("pair(2)", Arc::new(pair_groupoid(2))),
            ("pair(3)", Arc::new(pair_groupoid(3))),
            ("band(2, Z/2)", band2_z2()),
            (
                "action(Z/3 on 3 points)",
                Arc::new(
                    crate::groupoid::action_groupoid(
                        &cyclic_group(3),
                        &[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
                    )
                    .unwrap(),
                ),
            ),
            (
                "pair(2) ⊔ Z/2",
                Arc::new(disjoint_union(&pair_groupoid(2), &cyclic_group(2))),
            ),
        ]
    }

    #[test]
    fn theta_is_an_isomorphism_on_the_corpus() {
        for (name, g) in corpus() {
            for field in [q(), f5()] {
                let th = theta(&g, field).unwrap();
                assert!(th.violations.is_empty(), "{name}/{field:?}: {:?}", th.violations);
                assert!(th.is_isomorphism(), "{name}/{field:?} is not an isomorphism");
                assert_eq!(th.characters.groupoid.n_objects(), g.n_objects(), "{name}");
                assert_eq!(th.characters.groupoid.n_arrows(), g.n_arrows(), "{name}");
            }
        }
        // Characters of a split algebra are the coordinate projections in
        // basis order, so the evaluation functor lands on the identity
        // relabeling for the function model.
        let th = theta(&Arc::new(pair_groupoid(2)), q()).unwrap();
        assert_eq!(th.morphism.object_map, vec![0, 1]);
        assert_eq!(th.morphism.arrow_map, vec![0, 1, 2, 3]);
    }

    /// A rank-2 representation of pair(2): identity on the two loops, the
    /// coordinate swap on the two crossing arrows.
    fn swap_rep(g: &Arc<FiniteGroupoid>, field: FieldSpec) -> Representation {
        let swap = Matrix::from_fn(
            field,
            2,
            2,
            |i, j| if i == j { field.zero() } else { field.one() },
        );
        let matrices = (0..4)
            .map(|a| if a == 1 || a == 2 { swap.clone() } else { Matrix::identity(field, 2) })
            .collect();
        Representation::new(g.clone(), field, 2, matrices).unwrap()
    }

    fn assert_round_trip(g: &Arc<FiniteGroupoid>, e: &Representation, field: FieldSpec) {
        let h = repfun_concrete(g, field).unwrap();
        let th = theta_for(g, &h).unwrap();
        let c = comodule_from_rep(e, &h).unwrap();
        assert!(validate_comodule(&c).is_empty());
        let f = f_functor(&c, &th.characters).unwrap();
        assert!(validate_rep(&f).violations.is_empty());
        assert_eq!(f.rank(), e.rank());
        for a in 0..g.n_arrows() {
            assert_eq!(
                f.matrix(th.morphism.arrow_map[a]),
                e.matrix(a),
                "arrow {a} changed along the round trip"
            );
        }
    }

    #[test]
    fn comodule_round_trip_recovers_the_representation() {
        let g = Arc::new(pair_groupoid(2));
        for field in [q(), f5()] {
            let rank2 = swap_rep(&g, field);
            assert!(validate_rep(&rank2).violations.is_empty());
            assert_round_trip(&g, &trivial_rep(&g, field), field);
            assert_round_trip(&g, &rank2, field);
        }
        // a spanning rep with non-trivial isotropy: the regular representation
        // of Z/2 transported over the band
        let band = band2_z2();
        let spanning = spanning_family(&band, q());
        assert_eq!(spanning.reps.len(), 1);
        assert_eq!(spanning.reps[0].rank(), 2);
        assert_round_trip(&band, &spanning.reps[0], q());
    }

    #[test]
    fn mutated_cocycle_breaks_comodule_coassociativity() {
        let g = Arc::new(pair_groupoid(2));
        let h = repfun_concrete(&g, q()).unwrap();
        let mut matrices = swap_rep(&g, q()).matrices().to_vec();
        // arrow 1 = (0 ← 1) is not an identity, so only the cocycle law can
        // notice the damage
        let bumped = matrices[1].get(0, 0).add(&q().one());
        matrices[1].set(0, 0, bumped);
        let broken = Representation::new(g.clone(), q(), 2, matrices).unwrap();
        let c = comodule_from_rep(&broken, &h).unwrap();
        let violations = validate_comodule(&c);
        assert!(!violations.is_empty());
        assert!(violations.iter().any(|v| matches!(
            v,
            crate::hopf::ComoduleViolation::Coassociativity { .. }
        )));
        // and f_functor refuses the broken input
        let th = theta_for(&g, &h).unwrap();
        assert!(f_functor(&c, &th.characters).is_err());
    }

    #[test]
    fn trivial_and_rank_zero_comodules_map_to_trivial_representations() {
        let g = Arc::new(pair_groupoid(2));
        let h = repfun_concrete(&g, q()).unwrap();
        let th = theta_for(&g, &h).unwrap();

        let c = comodule_from_rep(&trivial_rep(&g, q()), &h).unwrap();
        assert_eq!(c.rank, trivial_comodule(&h).rank);
        assert_eq!(c.coaction, trivial_comodule(&h).coaction);

        let f = f_functor(&trivial_comodule(&h), &th.characters).unwrap();
        assert_eq!(f, trivial_rep(&th.characters.groupoid, q()));

        let zero = Comodule { hopf: h.clone(), rank: 0, coaction: vec![] };
        let f0 = f_functor(&zero, &th.characters).unwrap();
        assert_eq!(f0.rank(), 0);
        assert!(validate_rep(&f0).violations.is_empty());
    }

    #[test]
    fn omega_is_the_canonical_isomorphism_for_function_models() {
        // the one-object case is classical finite-group duality: functions on
        // a group are dual to functions on its character set
        let z3 = Arc::new(cyclic_group(3));
        let h = repfun_concrete(&z3, q()).unwrap();
        let om = omega(&h).unwrap();
        assert!(om.violations.is_empty(), "{:?}", om.violations);
        assert!(om.is_isomorphism());
        assert_eq!(om.target.dim(), 3);
        assert_eq!(om.characters.groupoid.n_objects(), 1);
        // the unit goes to the unit
        assert_eq!(om.morphism.total_map.apply(&h.total.unit), om.target.total.unit);

        for field in [q(), f5()] {
            let g = Arc::new(pair_groupoid(2));
            let h = repfun_concrete(&g, field).unwrap();
            let om = omega(&h).unwrap();
            assert!(om.violations.is_empty(), "{field:?}: {:?}", om.violations);
            assert!(om.bijective);
            assert_eq!(om.target.dim(), 4);
            assert_eq!(om.target.base_dim(), 2);
        }
    }

    #[test]
    fn omega_agrees_with_the_coend_route() {
        let cases: Vec<(Arc<FiniteGroupoid>, FieldSpec)> = vec![
            (Arc::new(unit_groupoid(3)), q()),
            (Arc::new(pair_groupoid(2)), q()),
            (band2_z2(), q()),
            (band2_z2(), f5()),
            (Arc::new(disjoint_union(&pair_groupoid(2), &cyclic_group(2))), q()),
        ];
        for (g, field) in cases {
            let r = repfun(&g, field, RepFunOptions::default()).unwrap();
            let report = omega_coend_oracle(&r).unwrap();
            assert!(report.ok(), "{field:?}: {:?}", report.failures);
            assert_eq!(report.checked, r.coend.dim() * g.n_arrows());
        }
    }

    #[test]
    fn triangle_one_holds_on_the_corpus() {
        let cases: Vec<(Arc<FiniteGroupoid>, FieldSpec)> = vec![
            (Arc::new(unit_groupoid(2)), q()),
            (Arc::new(pair_groupoid(3)), q()),
            (band2_z2(), q()),
            (band2_z2(), f5()),
            (Arc::new(disjoint_union(&pair_groupoid(2), &cyclic_group(2))), q()),
        ];
        for (g, field) in cases {
            let report = triangle_one(&g, field).unwrap();
            assert!(report.pass, "{field:?}: {:?}", report.witnesses);
        }
    }

    #[test]
    fn triangle_two_holds_for_function_models() {
        let hopfs: Vec<Arc<HopfAlgebroid>> = vec![
            repfun_concrete(&Arc::new(pair_groupoid(2)), q()).unwrap(),
            // k^{Z/3}: the group case
            repfun_concrete(&Arc::new(cyclic_group(3)), q()).unwrap(),
            repfun_concrete(&Arc::new(cyclic_group(3)), f5()).unwrap(),
            // disconnected input, recorded like any other
            repfun_concrete(
                &Arc::new(disjoint_union(&cyclic_group(2), &unit_groupoid(1))),
                q(),
            )
            .unwrap(),
        ];
        for h in hopfs {
            let report = triangle_two(&h).unwrap();
            assert!(report.pass, "{:?}", report.witnesses);
        }
    }

    #[test]
    fn theta_is_natural_on_the_corpus_morphisms() {
        let (_, _, diag) = diagonal_embedding(2);
        let z3 = Arc::new(cyclic_group(3));
        let (_, projection) =
            action_projection(&z3, &[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap();
        let band = band2_z2();
        let swap = band_automorphism(&band, 2, 2, &[1, 0]).unwrap();
        for (name, phi) in [("diagonal", &diag), ("projection", &projection), ("swap", &swap)] {
            let report = theta_naturality(phi, q()).unwrap();
            assert!(report.ok(), "{name}: {:?}", report.failures);
            assert_eq!(report.checked, phi.dom.n_objects() + phi.dom.n_arrows());
        }
    }

    #[test]
    fn omega_is_natural_for_function_model_morphisms() {
        let (unit2, pair2, diag) = diagonal_embedding(2);
        let h_unit = repfun_concrete(&unit2, q()).unwrap();
        let h_pair = repfun_concrete(&pair2, q()).unwrap();
        let r_diag = repfun_on_morphism(&diag, &h_pair, &h_unit);
        assert!(omega_naturality(&r_diag).unwrap().ok());

        let band = band2_z2();
        let swap = band_automorphism(&band, 2, 2, &[1, 0]).unwrap();
        let h_band = repfun_concrete(&band, q()).unwrap();
        let r_swap = repfun_on_morphism(&swap, &h_band, &h_band);
        assert!(omega_naturality(&r_swap).unwrap().ok());

        let pair3 = Arc::new(pair_groupoid(3));
        let td = transitive_decomposition(&pair3, 0, q()).unwrap();
        assert!(omega_naturality(&td.hopf_iso).unwrap().ok());
    }

    #[test]
    fn hom_sets_are_in_bijection_with_frozen_counts() {
        let z2 = Arc::new(cyclic_group(2));
        let z3 = Arc::new(cyclic_group(3));
        let point = Arc::new(unit_groupoid(1));
        let k_z2 = repfun_concrete(&z2, q()).unwrap();
        let r_pair2 = repfun_concrete(&Arc::new(pair_groupoid(2)), q()).unwrap();
        let r_band = repfun_concrete(&band2_z2(), q()).unwrap();

        // group homomorphisms Z/2 → Z/2
        let report = duality_bijection_check(&k_z2, &z2, 10).unwrap();
        assert_eq!(report.morphisms, 2);
        assert!(report.ok(), "{:?}", report.failures);

        // a functor from the point picks an object of pair(2)
        let report = duality_bijection_check(&r_pair2, &point, 10).unwrap();
        assert_eq!(report.morphisms, 2);
        assert!(report.ok(), "{:?}", report.failures);

        // only the trivial homomorphism Z/3 → Z/2
        let report = duality_bijection_check(&k_z2, &z3, 10).unwrap();
        assert_eq!(report.morphisms, 1);
        assert!(report.ok(), "{:?}", report.failures);

        // functors Z/2 → band(2, Z/2): two objects × two group endomorphisms
        let report = duality_bijection_check(&r_band, &z2, 10).unwrap();
        assert_eq!(report.morphisms, 4);
        assert!(report.ok(), "{:?}", report.failures);

        // the enumeration guard propagates
        let err = duality_bijection_check(&k_z2, &z2, 1).unwrap_err();
        assert!(matches!(
            err,
            RepFunError::Groupoid(GroupoidError::GuardExceeded { arrows: 2, guard: 1 })
        ));
    }

    #[test]
    fn round_trip_summarizes_the_duality() {
        let rt = round_trip(&Arc::new(pair_groupoid(3)), q()).unwrap();
        assert_eq!((rt.objects, rt.arrows), (3, 9));
        assert_eq!((rt.base_dim, rt.total_dim), (3, 9));
        assert!(rt.theta_iso && rt.triangle_one && rt.triangle_two);
        assert!(rt.projective && rt.faithfully_flat);
        assert!(rt.empty_blocks.is_empty());

        // disconnected: the duality round trips still close, only flatness fails
        let rt = round_trip(&Arc::new(unit_groupoid(2)), q()).unwrap();
        assert!(rt.theta_iso && rt.triangle_one && rt.triangle_two);
        assert!(rt.projective && !rt.faithfully_flat);
        assert_eq!(
            rt.empty_blocks,
            vec![("x0".into(), "x1".into()), ("x1".into(), "x0".into())]
        );
    }
}
