//! Finite-dimensional representations of finite groupoids.
//!
//! A representation assigns the fiber k^d to every object (fully trivialized:
//! only the arrow matrices are stored) and an invertible d×d matrix to every
//! arrow, functorially: `ϱ_{g∘f} = ϱ_g · ϱ_f` on column vectors and
//! `ϱ_{ι(x)} = I`. The module also provides intertwiners (solved exactly as a
//! kernel computation), kernels/cokernels, the sections functor Γ (a fiber
//! functor into modules over `B = k^objects`), and spanning families whose
//! matrix coefficients span all functions on arrows.

use crate::field::{FieldSpec, Scalar};
use crate::groupoid::{
    connected_components, isotropy_group, FiniteGroupoid, GroupoidError, GroupoidMorphism,
};
use crate::matrix::{LinalgError, Matrix};
use crate::par;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    groupoid: Arc<FiniteGroupoid>,
    field: FieldSpec,
    rank: usize,
    matrices: Vec<Matrix>, // one per arrow
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum RepError {
    #[error("matrix count {found} does not match arrow count {expected}")]
    MatrixCount { expected: usize, found: usize },
    #[error("matrix for arrow {arrow} is {rows}x{cols}, expected {rank}x{rank}")]
    MatrixShape { arrow: usize, rows: usize, cols: usize, rank: usize },
    #[error("matrix for arrow {arrow} is over the wrong field")]
    MatrixField { arrow: usize },
    #[error("representations live on different groupoids")]
    GroupoidMismatch,
    #[error("representations live over different fields")]
    FieldMismatch,
    #[error("fiberwise rank is not constant: {dims:?}")]
    NonConstantRank { dims: Vec<usize> },
    #[error("the morphism is not an intertwiner; refusing to build sub/quotient structure")]
    NotAnIntertwiner,
    #[error("linear algebra failure: {0}")]
    Linalg(#[from] LinalgError),
    #[error("groupoid failure: {0}")]
    Groupoid(#[from] GroupoidError),
}

/// One violated representation law with its witness tuple.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub enum RepViolation {
    IdentityArrow { object: usize },
    Composition { g: usize, f: usize },
    Invertibility { arrow: usize },
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RepReport {
    pub violations: Vec<RepViolation>,
}

impl RepReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Representation {
    /// Shape checks only; the laws are [`validate_rep`]'s job.
    pub fn new(
        groupoid: Arc<FiniteGroupoid>,
        field: FieldSpec,
        rank: usize,
        matrices: Vec<Matrix>,
    ) -> Result<Representation, RepError> {
        if matrices.len() != groupoid.n_arrows() {
            return Err(RepError::MatrixCount {
                expected: groupoid.n_arrows(),
                found: matrices.len(),
            });
        }
        for (a, m) in matrices.iter().enumerate() {
            if m.rows() != rank || m.cols() != rank {
                return Err(RepError::MatrixShape {
                    arrow: a,
                    rows: m.rows(),
                    cols: m.cols(),
                    rank,
                });
            }
            if m.field() != field {
                return Err(RepError::MatrixField { arrow: a });
            }
        }
        Ok(Representation { groupoid, field, rank, matrices })
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self, arrow: usize) -> &Matrix {
        &self.matrices[arrow]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }
}

/// Checks identity arrows map to I, every composite to the matrix product,
/// and every arrow matrix to an invertible matrix.
pub fn validate_rep(r: &Representation) -> RepReport {
    let g = &r.groupoid;
    let mut violations = Vec::new();
    for x in 0..g.n_objects() {
        if !r.matrix(g.identity(x)).is_identity() {
            violations.push(RepViolation::IdentityArrow { object: x });
        }
    }
    let per_arrow = par::map_range(g.n_arrows(), |a| {
        let mut local = Vec::new();
        if !r.matrix(a).is_invertible() {
            local.push(RepViolation::Invertibility { arrow: a });
        }
        for f in 0..g.n_arrows() {
            if let Some(af) = g.compose(a, f) {
                if r.matrix(a).mul(r.matrix(f)) != *r.matrix(af) {
                    local.push(RepViolation::Composition { g: a, f });
                }
            }
        }
        local
    });
    violations.extend(per_arrow.into_iter().flatten());
    RepReport { violations }
}

/// The monoidal unit 𝓘: rank 1, every arrow acts as 1.
pub fn trivial_rep(g: &Arc<FiniteGroupoid>, field: FieldSpec) -> Representation {
    let matrices = (0..g.n_arrows()).map(|_| Matrix::identity(field, 1)).collect();
    Representation::new(g.clone(), field, 1, matrices).expect("trivial rep shape")
}

/// Fiberwise tensor product: Kronecker products arrow by arrow.
pub fn tensor_rep(e: &Representation, f: &Representation) -> Result<Representation, RepError> {
    if e.groupoid != f.groupoid {
        return Err(RepError::GroupoidMismatch);
    }
    if e.field != f.field {
        return Err(RepError::FieldMismatch);
    }
    let matrices = e
        .matrices
        .iter()
        .zip(&f.matrices)
        .map(|(a, b)| a.kron(b))
        .collect::<Result<Vec<_>, _>>()?;
    Representation::new(e.groupoid.clone(), e.field, e.rank * f.rank, matrices)
}

/// Fiberwise dual: `ϱ*_g = (ϱ_g⁻¹)ᵀ = (ϱ_{g⁻¹})ᵀ`, computed through the
/// inverse arrow so no matrix inversion is needed.
pub fn dual_rep(e: &Representation) -> Representation {
    let g = &e.groupoid;
    let matrices = (0..g.n_arrows())
        .map(|a| e.matrix(g.inverse(a)).transpose())
        .collect();
    Representation::new(g.clone(), e.field, e.rank, matrices).expect("dual rep shape")
}

/// Fiberwise direct sum: block-diagonal matrices.
pub fn direct_sum(e: &Representation, f: &Representation) -> Result<Representation, RepError> {
    if e.groupoid != f.groupoid {
        return Err(RepError::GroupoidMismatch);
    }
    if e.field != f.field {
        return Err(RepError::FieldMismatch);
    }
    let rank = e.rank + f.rank;
    let matrices = e
        .matrices
        .iter()
        .zip(&f.matrices)
        .map(|(a, b)| {
            Matrix::from_fn(e.field, rank, rank, |i, j| {
                if i < e.rank && j < e.rank {
                    a.get(i, j).clone()
                } else if i >= e.rank && j >= e.rank {
                    b.get(i - e.rank, j - e.rank).clone()
                } else {
                    e.field.zero()
                }
            })
        })
        .collect();
    Representation::new(e.groupoid.clone(), e.field, rank, matrices)
}

/// Pullback along a groupoid morphism: `(φ*r)_g = r_{φ(g)}`.
pub fn restrict_along(
    phi: &GroupoidMorphism,
    r: &Representation,
) -> Result<Representation, RepError> {
    if *r.groupoid() != phi.cod {
        return Err(RepError::GroupoidMismatch);
    }
    let matrices = phi.arrow_map.iter().map(|&a| r.matrix(a).clone()).collect();
    Representation::new(phi.dom.clone(), r.field, r.rank, matrices)
}

// ---------------------------------------------------------------------------
// Morphisms of representations
// ---------------------------------------------------------------------------

/// A family of per-object maps `α_x: E_x → F_x` (each a d_F×d_E matrix)
/// intended to satisfy `α_{tgt(g)} ϱᴱ_g = ϱᶠ_g α_{src(g)}` for every arrow.
#[derive(Clone, Debug, PartialEq)]
pub struct RepMorphism {
    pub source: Arc<Representation>,
    pub target: Arc<Representation>,
    pub components: Vec<Matrix>,
}

impl RepMorphism {
    pub fn identity(e: &Arc<Representation>) -> RepMorphism {
        let n = e.groupoid().n_objects();
        RepMorphism {
            source: e.clone(),
            target: e.clone(),
            components: (0..n).map(|_| Matrix::identity(e.field(), e.rank())).collect(),
        }
    }

    pub fn is_intertwiner(&self) -> bool {
        let g = self.source.groupoid();
        if self.target.groupoid() != g
            || self.components.len() != g.n_objects()
            || self.components.iter().any(|m| {
                m.rows() != self.target.rank() || m.cols() != self.source.rank()
            })
        {
            return false;
        }
        (0..g.n_arrows()).all(|a| {
            self.components[g.tgt(a)].mul(self.source.matrix(a))
                == self.target.matrix(a).mul(&self.components[g.src(a)])
        })
    }

    /// Fiberwise surjectivity (full rank at every object).
    pub fn is_fiberwise_surjective(&self) -> bool {
        self.components.iter().all(|m| m.rank() == m.rows())
    }
}

/// A basis of `Hom(E, F)`, found by solving the intertwining equations
/// exactly: unknowns are all entries of all components, ordered
/// `(x, r, c) ↦ x·d_F·d_E + r·d_E + c`, and each arrow contributes the
/// equations `α_{tgt} ϱᴱ − ϱᶠ α_{src} = 0` entrywise.
/// Permutation tables (`column ↦ row`) of every matrix, if all are permutations.
fn permutation_tables(r: &Representation) -> Option<Vec<Vec<usize>>> {
    r.matrices().iter().map(|m| m.as_permutation()).collect()
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

pub fn intertwiner_space(
    e: &Arc<Representation>,
    f: &Arc<Representation>,
) -> Result<Vec<RepMorphism>, RepError> {
    if e.groupoid() != f.groupoid() {
        return Err(RepError::GroupoidMismatch);
    }
    if e.field() != f.field() {
        return Err(RepError::FieldMismatch);
    }
    let g = e.groupoid();
    let field = e.field();
    let (de, df) = (e.rank(), f.rank());
    let block = df * de;

    // Permutation representations admit an orbit basis: T is an intertwiner
    // iff T_{src a}[r][c] = T_{tgt a}[pf_a(r)][pe_a(c)] for every arrow a,
    // i.e. iff T is constant on the orbits of the induced action on
    // (object, row, column) triples — over any field. This avoids the dense
    // kernel solve, which is infeasible for large tensor powers.
    if let (Some(pe), Some(pf)) = (permutation_tables(e), permutation_tables(f)) {
        let node = |x: usize, r: usize, c: usize| x * block + r * de + c;
        let mut uf = UnionFind::new(g.n_objects() * block);
        for a in 0..g.n_arrows() {
            let (s, t) = (g.src(a), g.tgt(a));
            for r in 0..df {
                for c in 0..de {
                    uf.union(node(s, r, c), node(t, pf[a][r], pe[a][c]));
                }
            }
        }
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..g.n_objects() * block {
            by_root.entry(uf.find(v)).or_default().push(v);
        }
        let mut orbits: Vec<Vec<usize>> = by_root.into_values().collect();
        orbits.sort_by_key(|o| o[0]);
        return Ok(orbits
            .into_iter()
            .map(|members| {
                let mut components =
                    vec![Matrix::zeros(field, df, de); g.n_objects()];
                for v in members {
                    let (x, rest) = (v / block, v % block);
                    components[x].set(rest / de, rest % de, field.one());
                }
                RepMorphism { source: e.clone(), target: f.clone(), components }
            })
            .collect());
    }
    let unknowns = g.n_objects() * block;
    let rows = g.n_arrows() * block;
    let mut system = Matrix::zeros(field, rows, unknowns);
    for a in 0..g.n_arrows() {
        let (s, t) = (g.src(a), g.tgt(a));
        let (ea, fa) = (e.matrix(a), f.matrix(a));
        for r in 0..df {
            for c in 0..de {
                let row = a * block + r * de + c;
                for k in 0..de {
                    // + α_t[r][k] · E_a[k][c]
                    let col = t * block + r * de + k;
                    let v = system.get(row, col).clone().add(ea.get(k, c));
                    system.set(row, col, v);
                }
                for k in 0..df {
                    // − F_a[r][k] · α_s[k][c]
                    let col = s * block + k * de + c;
                    let v = system.get(row, col).clone().sub(fa.get(r, k));
                    system.set(row, col, v);
                }
            }
        }
    }
    let basis = system.kernel_basis();
    Ok((0..basis.cols())
        .map(|m| {
            let v = basis.column(m);
            RepMorphism {
                source: e.clone(),
                target: f.clone(),
                components: (0..g.n_objects())
                    .map(|x| {
                        Matrix::from_fn(field, df, de, |r, c| v[x * block + r * de + c].clone())
                    })
                    .collect(),
            }
        })
        .collect())
}

pub fn hom_dim(e: &Arc<Representation>, f: &Arc<Representation>) -> Result<usize, RepError> {
    Ok(intertwiner_space(e, f)?.len())
}

/// Kernel and cokernel of an intertwiner, as representations with inclusion
/// and projection morphisms. Requires constant fiberwise rank (the category
/// of constant-rank representations only has kernels/cokernels there).
pub struct KernelCokernel {
    pub kernel: Arc<Representation>,
    pub inclusion: RepMorphism,
    pub cokernel: Arc<Representation>,
    pub projection: RepMorphism,
}

pub fn kernel_cokernel(m: &RepMorphism) -> Result<KernelCokernel, RepError> {
    if !m.is_intertwiner() {
        return Err(RepError::NotAnIntertwiner);
    }
    let g = m.source.groupoid().clone();
    let field = m.source.field();
    let n = g.n_objects();

    // Kernel: per-object nullspace bases as columns.
    let kernel_bases: Vec<Matrix> = (0..n).map(|x| m.components[x].kernel_basis()).collect();
    let kdims: Vec<usize> = kernel_bases.iter().map(|b| b.cols()).collect();
    if kdims.windows(2).any(|w| w[0] != w[1]) {
        return Err(RepError::NonConstantRank { dims: kdims });
    }
    let kdim = kdims[0];
    let kernel_matrices: Vec<Matrix> = (0..g.n_arrows())
        .map(|a| {
            // solve K_t · X = E_a · K_s; solvable since ker is invariant
            let rhs = m.source.matrix(a).mul(&kernel_bases[g.src(a)]);
            kernel_bases[g.tgt(a)]
                .solve_linear(&rhs)
                .expect("shapes agree")
                .expect("kernel is arrow-invariant for an intertwiner")
        })
        .collect();
    let kernel = Arc::new(Representation::new(g.clone(), field, kdim, kernel_matrices)?);
    let inclusion = RepMorphism {
        source: kernel.clone(),
        target: m.source.clone(),
        components: kernel_bases,
    };

    // Cokernel: per-object quotient maps by the column space of α_x.
    let mut qmaps = Vec::with_capacity(n);
    for x in 0..n {
        qmaps.push(quotient_by_column_space(&m.components[x]));
    }
    let cdims: Vec<usize> = qmaps.iter().map(|q| q.map.rows()).collect();
    if cdims.windows(2).any(|w| w[0] != w[1]) {
        return Err(RepError::NonConstantRank { dims: cdims });
    }
    let cdim = cdims[0];
    let coker_matrices: Vec<Matrix> = (0..g.n_arrows())
        .map(|a| {
            let (s, t) = (g.src(a), g.tgt(a));
            let action = qmaps[t].map.mul(m.target.matrix(a)).mul(&qmaps[s].section);
            // induced map must satisfy action ∘ Q_s = Q_t ∘ F_a
            assert_eq!(
                action.mul(&qmaps[s].map),
                qmaps[t].map.mul(m.target.matrix(a)),
                "image of the intertwiner is not arrow-invariant"
            );
            action
        })
        .collect();
    let cokernel = Arc::new(Representation::new(g.clone(), field, cdim, coker_matrices)?);
    let projection = RepMorphism {
        source: m.target.clone(),
        target: cokernel.clone(),
        components: qmaps.into_iter().map(|q| q.map).collect(),
    };
    Ok(KernelCokernel { kernel, inclusion, cokernel, projection })
}

struct QuotientMap {
    /// (n − r) × n matrix computing quotient coordinates
    map: Matrix,
    /// n × (n − r) section with `map · section = I`
    section: Matrix,
}

/// Quotient of k^rows(a) by the column space of `a`: reduce against the RREF
/// of `aᵀ` and read off the non-pivot coordinates.
fn quotient_by_column_space(a: &Matrix) -> QuotientMap {
    let field = a.field();
    let n = a.rows();
    let r = a.transpose().rref();
    let pivots = &r.pivots;
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let map = Matrix::from_fn(field, free.len(), n, |i, j| {
        if j == free[i] {
            field.one()
        } else if let Some(k) = pivots.iter().position(|&p| p == j) {
            r.matrix.get(k, free[i]).clone().neg()
        } else {
            field.zero()
        }
    });
    let section = Matrix::from_fn(field, n, free.len(), |j, i| {
        if j == free[i] {
            field.one()
        } else {
            field.zero()
        }
    });
    QuotientMap { map, section }
}

// ---------------------------------------------------------------------------
// Sections: the fiber functor into B-modules
// ---------------------------------------------------------------------------

/// Γ(E) is the free module B^d over B = k^objects; as a k-space it has the
/// object-major basis `(x, i) ↦ x·d + i`.
pub struct SectionsModule {
    pub rep: Arc<Representation>,
    pub dim: usize,
}

pub fn global_sections(e: &Arc<Representation>) -> SectionsModule {
    SectionsModule { rep: e.clone(), dim: e.groupoid().n_objects() * e.rank() }
}

pub fn section_index(e: &Representation, x: usize, i: usize) -> usize {
    x * e.rank() + i
}

/// Γ on morphisms: the block-diagonal matrix with blocks `α_x`.
pub fn sections_map(m: &RepMorphism) -> Matrix {
    let g = m.source.groupoid();
    let field = m.source.field();
    let (de, df) = (m.source.rank(), m.target.rank());
    let n = g.n_objects();
    Matrix::from_fn(field, n * df, n * de, |r, c| {
        let (x, i) = (r / df, r % df);
        let (y, j) = (c / de, c % de);
        if x == y {
            m.components[x].get(i, j).clone()
        } else {
            field.zero()
        }
    })
}

/// Basis of the balanced tensor Γ(E) ⊗_B Γ(F): pairs of section indices over
/// the same object, in lexicographic order.
pub fn sections_balanced_pairs(e: &Representation, f: &Representation) -> Vec<(usize, usize)> {
    let n = e.groupoid().n_objects();
    let mut pairs = Vec::new();
    for x in 0..n {
        for i in 0..e.rank() {
            for y in 0..n {
                if y == x {
                    for j in 0..f.rank() {
                        pairs.push((section_index(e, x, i), section_index(f, y, j)));
                    }
                }
            }
        }
    }
    pairs
}

/// The monoidal-structure isomorphism ψ: Γ(E)⊗_B Γ(F) → Γ(E⊗F), sending the
/// balanced pair (δ_x e_i, δ_x e_j) to the section δ_x e_{i·d_F+j} — that is,
/// pointwise tensoring of sections. Returns the matrix on the bases above
/// (a permutation). Its inverse is the transpose.
pub fn sections_tensor_iso(e: &Representation, f: &Representation) -> Matrix {
    let field = e.field();
    let pairs = sections_balanced_pairs(e, f);
    let (de, df) = (e.rank(), f.rank());
    let n = e.groupoid().n_objects();
    let mut m = Matrix::zeros(field, n * de * df, pairs.len());
    for (col, &(si, sj)) in pairs.iter().enumerate() {
        let (x, i) = (si / de, si % de);
        let j = sj % df;
        m.set(x * de * df + i * df + j, col, field.one());
    }
    m
}

/// Matrix of `ω(α) ⊗_B ω(β)` on balanced pair bases.
pub fn sections_map_tensor(alpha: &RepMorphism, beta: &RepMorphism) -> Matrix {
    let field = alpha.source.field();
    let dom_pairs = sections_balanced_pairs(&alpha.source, &beta.source);
    let cod_pairs = sections_balanced_pairs(&alpha.target, &beta.target);
    let wa = sections_map(alpha);
    let wb = sections_map(beta);
    Matrix::from_fn(field, cod_pairs.len(), dom_pairs.len(), |r, c| {
        let (ri, rj) = cod_pairs[r];
        let (ci, cj) = dom_pairs[c];
        wa.get(ri, ci).clone().mul(wb.get(rj, cj))
    })
}

/// The canonical base-change map `Hom(E,F) ⊗_k B → Hom_B(Γ(E), Γ(F))`,
/// `α ⊗ δ_x ↦ [s ↦ y ↦ α_y(s(y))·δ_x(y)]`, reported with both dimensions and
/// its rank; injective iff rank = dim·n.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct BaseChangeReport {
    pub hom_dim: usize,
    pub domain_dim: usize,
    pub rank: usize,
    pub injective: bool,
}

pub fn hom_base_change_injectivity(
    e: &Arc<Representation>,
    f: &Arc<Representation>,
) -> Result<BaseChangeReport, RepError> {
    let basis = intertwiner_space(e, f)?;
    let g = e.groupoid();
    let n = g.n_objects();
    let field = e.field();
    let hom_dim = basis.len();
    let target_dim = (n * f.rank()) * (n * e.rank());
    let mut rows = Vec::with_capacity(hom_dim * n);
    for alpha in &basis {
        for x in 0..n {
            // α ⊗ δ_x: block-diagonal map with only block x present
            let truncated = RepMorphism {
                source: alpha.source.clone(),
                target: alpha.target.clone(),
                components: (0..n)
                    .map(|y| {
                        if y == x {
                            alpha.components[x].clone()
                        } else {
                            Matrix::zeros(field, f.rank(), e.rank())
                        }
                    })
                    .collect(),
            };
            let m = sections_map(&truncated);
            rows.push((0..target_dim).map(|k| m.get(k / m.cols(), k % m.cols()).clone()).collect::<Vec<_>>());
        }
    }
    let rank = if rows.is_empty() {
        0
    } else {
        Matrix::from_rows(field, rows)?.rank()
    };
    let domain_dim = hom_dim * n;
    Ok(BaseChangeReport { hom_dim, domain_dim, rank, injective: rank == domain_dim })
}

// ---------------------------------------------------------------------------
// Spanning families
// ---------------------------------------------------------------------------

/// A family of representations whose matrix coefficients, together with the
/// B⊗B action, span all functions on arrows. One representation per connected
/// component: the regular representation of the isotropy group at the
/// component's base point, transported along spanning arrows, identity
/// elsewhere, all padded to a common rank.
pub struct SpanningFamily {
    pub groupoid: Arc<FiniteGroupoid>,
    pub field: FieldSpec,
    pub reps: Vec<Arc<Representation>>,
    /// base point per component (smallest object id)
    pub base_points: Vec<usize>,
    /// per object: the chosen arrow to its component's base point
    /// (the identity at the base point itself)
    pub taus: Vec<usize>,
}

pub fn spanning_family(g: &Arc<FiniteGroupoid>, field: FieldSpec) -> SpanningFamily {
    let comps = connected_components(g);
    let n_comp = comps.members.len();
    let base_points: Vec<usize> = comps.members.iter().map(|m| m[0]).collect();

    let mut taus = vec![usize::MAX; g.n_objects()];
    for (c, members) in comps.members.iter().enumerate() {
        let xc = base_points[c];
        for &y in members {
            taus[y] = if y == xc {
                g.identity(xc)
            } else {
                (0..g.n_arrows())
                    .find(|&a| g.src(a) == y && g.tgt(a) == xc)
                    .expect("same component implies a connecting arrow")
            };
        }
    }

    let loops_per_comp: Vec<Vec<usize>> = base_points.iter().map(|&x| g.loops_at(x)).collect();
    let common_rank = loops_per_comp.iter().map(|l| l.len()).max().unwrap_or(1);

    let mut reps: Vec<Arc<Representation>> = Vec::new();
    for c in 0..n_comp {
        let loops = &loops_per_comp[c];
        let k = loops.len();
        let matrices: Vec<Matrix> = (0..g.n_arrows())
            .map(|a| {
                if comps.component_of[g.src(a)] != c {
                    return Matrix::identity(field, common_rank);
                }
                // h = τ_{tgt(a)} ∘ a ∘ τ_{src(a)}⁻¹, a loop at the base point
                let h = g
                    .compose(taus[g.tgt(a)], a)
                    .and_then(|m| g.compose(m, g.inverse(taus[g.src(a)])))
                    .expect("conjugation by spanning arrows stays composable");
                // left-multiplication permutation on the loop basis,
                // identity on the padding block
                Matrix::from_fn(field, common_rank, common_rank, |i, j| {
                    let hit = if i < k && j < k {
                        loops[i] == g.compose(h, loops[j]).expect("loops compose")
                    } else {
                        i == j
                    };
                    if hit {
                        field.one()
                    } else {
                        field.zero()
                    }
                })
            })
            .collect();
        let rep = Representation::new(g.clone(), field, common_rank, matrices)
            .expect("spanning rep shape");
        if !reps.iter().any(|r| **r == rep) {
            reps.push(Arc::new(rep));
        }
    }

    SpanningFamily { groupoid: g.clone(), field, reps, base_points, taus }
}

/// Rows = all B⊗B-translates of all matrix coefficients of the family:
/// `(m, x, i, y, j) ↦ (g ↦ [tgt g = x]·(ϱᵐ_g)_{ij}·[src g = y])`.
/// The row space is the span of representative functions; a full family has
/// rank = number of arrows.
pub fn matrix_coefficient_span(
    g: &FiniteGroupoid,
    field: FieldSpec,
    reps: &[Arc<Representation>],
) -> Matrix {
    let m_arr = g.n_arrows();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for rep in reps {
        let d = rep.rank();
        for x in 0..g.n_objects() {
            for i in 0..d {
                for y in 0..g.n_objects() {
                    for j in 0..d {
                        let mut row = Vec::with_capacity(m_arr);
                        for a in 0..m_arr {
                            if g.tgt(a) == x && g.src(a) == y {
                                row.push(rep.matrix(a).get(i, j).clone());
                            } else {
                                row.push(field.zero());
                            }
                        }
                        rows.push(row);
                    }
                }
            }
        }
    }
    Matrix::from_rows(field, rows).expect("uniform rows")
}

/// Regular representation of a one-object groupoid (a finite group), through
/// the spanning-family machinery specialized to that single component.
pub fn regular_rep(
    group: &Arc<FiniteGroupoid>,
    field: FieldSpec,
) -> Result<Arc<Representation>, RepError> {
    if group.n_objects() != 1 {
        return Err(RepError::Groupoid(GroupoidError::NotAGroup {
            objects: group.n_objects(),
        }));
    }
    let fam = spanning_family(group, field);
    Ok(fam.reps[0].clone())
}

/// Isotropy group plus its regular representation at an object (used by the
/// spanning-family tests and the isotropy Hopf-algebra comparison).
pub fn isotropy_regular_rep(
    g: &Arc<FiniteGroupoid>,
    x: usize,
    field: FieldSpec,
) -> Result<(Arc<FiniteGroupoid>, Arc<Representation>), RepError> {
    let (group, _) = isotropy_group(g, x)?;
    let rep = regular_rep(&group, field)?;
    Ok((group, rep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{
        band_groupoid, cyclic_group, disjoint_union, pair_groupoid, symmetric_group_3,
        translation_action, unit_groupoid, validate_morphism,
    };
    use crate::groupoid::action_groupoid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn corpus(field: FieldSpec) -> Vec<Arc<FiniteGroupoid>> {
        let z2 = cyclic_group(2);
        let s3 = symmetric_group_3();
        let (z3, act) = translation_action(3);
        let _ = field;
        vec![
            Arc::new(unit_groupoid(3)),
            Arc::new(pair_groupoid(2)),
            Arc::new(pair_groupoid(3)),
            Arc::new(band_groupoid(2, &z2).unwrap()),
            Arc::new(band_groupoid(2, &s3).unwrap()),
            Arc::new(action_groupoid(&z3, &act).unwrap()),
            Arc::new(disjoint_union(&pair_groupoid(2), &z2)),
        ]
    }

    #[test]
    fn constructions_validate() {
        for field in [FieldSpec::Rational, FieldSpec::Prime(5)] {
            for g in corpus(field) {
                let fam = spanning_family(&g, field);
                for rep in &fam.reps {
                    assert!(validate_rep(rep).ok());
                    assert!(validate_rep(&dual_rep(rep)).ok());
                    let t = tensor_rep(rep, rep).unwrap();
                    assert!(validate_rep(&t).ok());
                    let s = direct_sum(rep, &trivial_rep(&g, field)).unwrap();
                    assert!(validate_rep(&s).ok());
                }
            }
        }
    }

    #[test]
    fn rigid_duality_pairing() {
        // transpose(ϱ*_g) · ϱ_g = I for every arrow
        let field = FieldSpec::Rational;
        for g in corpus(field) {
            let fam = spanning_family(&g, field);
            for rep in &fam.reps {
                let dual = dual_rep(rep);
                for a in 0..g.n_arrows() {
                    assert!(dual.matrix(a).transpose().mul(rep.matrix(a)).is_identity());
                }
            }
        }
    }

    #[test]
    fn permutation_reps_are_self_dual() {
        let field = FieldSpec::Rational;
        let g = Arc::new(band_groupoid(2, &cyclic_group(2)).unwrap());
        let fam = spanning_family(&g, field);
        assert_eq!(dual_rep(&fam.reps[0]), *fam.reps[0]);
    }

    #[test]
    fn orbit_basis_agrees_with_the_dense_solver() {
        // Conjugating a permutation representation by a non-permutation
        // change of basis routes the same hom problem through the dense
        // kernel solver; dimensions must agree, and the orbit basis must
        // consist of honest intertwiners.
        let field = FieldSpec::Rational;
        let g = Arc::new(band_groupoid(2, &symmetric_group_3()).unwrap());
        let e = spanning_family(&g, field).reps[0].clone();
        let basis = intertwiner_space(&e, &e).unwrap();
        for t in &basis {
            assert!(t.is_intertwiner());
        }

        let d = e.rank();
        let p = Matrix::from_fn(field, d, d, |r, c| {
            if r == c {
                field.one()
            } else if r + 1 == c {
                field.from_i64(2)
            } else {
                field.zero()
            }
        });
        let p_inv = p.inverse().unwrap();
        let twisted = Arc::new(
            Representation::new(
                g.clone(),
                field,
                d,
                (0..g.n_arrows()).map(|a| p.mul(e.matrix(a)).mul(&p_inv)).collect(),
            )
            .unwrap(),
        );
        assert!(twisted.matrices().iter().any(|m| m.as_permutation().is_none()));
        assert_eq!(hom_dim(&twisted, &twisted).unwrap(), basis.len());
    }

    #[test]
    fn spanning_family_shapes() {
        let field = FieldSpec::Rational;
        let expect = |g: &Arc<FiniteGroupoid>, shapes: &[usize]| {
            let fam = spanning_family(g, field);
            let got: Vec<usize> = fam.reps.iter().map(|r| r.rank()).collect();
            assert_eq!(got, shapes, "{:?}", g.object_names());
        };
        expect(&Arc::new(unit_groupoid(3)), &[1]);
        expect(&Arc::new(pair_groupoid(2)), &[1]);
        expect(&Arc::new(pair_groupoid(3)), &[1]);
        expect(&Arc::new(band_groupoid(2, &cyclic_group(2)).unwrap()), &[2]);
        expect(&Arc::new(band_groupoid(2, &symmetric_group_3()).unwrap()), &[6]);
        let (z3, act) = translation_action(3);
        expect(&Arc::new(action_groupoid(&z3, &act).unwrap()), &[1]);
        expect(&Arc::new(disjoint_union(&pair_groupoid(2), &cyclic_group(2))), &[2, 2]);
    }

    #[test]
    fn spanning_family_spans_all_functions() {
        for field in [FieldSpec::Rational, FieldSpec::Prime(5)] {
            for g in corpus(field) {
                let fam = spanning_family(&g, field);
                let span = matrix_coefficient_span(&g, field, &fam.reps);
                assert_eq!(
                    span.rank(),
                    g.n_arrows(),
                    "coefficients of {:?} do not span",
                    g.object_names()
                );
            }
        }
    }

    #[test]
    fn intertwiner_dimensions() {
        let field = FieldSpec::Rational;
        // End(𝓘) has one dimension per connected component.
        let cases: Vec<(Arc<FiniteGroupoid>, usize)> = vec![
            (Arc::new(unit_groupoid(3)), 3),
            (Arc::new(pair_groupoid(2)), 1),
            (Arc::new(disjoint_union(&pair_groupoid(2), &cyclic_group(2))), 2),
        ];
        for (g, expected) in cases {
            let i = Arc::new(trivial_rep(&g, field));
            assert_eq!(hom_dim(&i, &i).unwrap(), expected);
        }
        // End(regular rep of H) has dimension |H| even at d ≠ 0 characteristic.
        for field in [FieldSpec::Rational, FieldSpec::Prime(5), FieldSpec::Prime(2)] {
            let z2 = Arc::new(cyclic_group(2));
            let reg = regular_rep(&z2, field).unwrap();
            assert_eq!(hom_dim(&reg, &reg).unwrap(), 2);
            let band = Arc::new(band_groupoid(2, &cyclic_group(2)).unwrap());
            let fam = spanning_family(&band, field);
            assert_eq!(hom_dim(&fam.reps[0], &fam.reps[0]).unwrap(), 2);
        }
        let s3band = Arc::new(band_groupoid(2, &symmetric_group_3()).unwrap());
        let fam = spanning_family(&s3band, FieldSpec::Rational);
        assert_eq!(hom_dim(&fam.reps[0], &fam.reps[0]).unwrap(), 6);
    }

    #[test]
    fn intertwiners_satisfy_the_equations() {
        let field = FieldSpec::Prime(5);
        let g = Arc::new(band_groupoid(2, &cyclic_group(2)).unwrap());
        let fam = spanning_family(&g, field);
        let e = &fam.reps[0];
        let i = Arc::new(trivial_rep(&g, field));
        for pair in [(e, e), (&i, e), (e, &i)] {
            for m in intertwiner_space(pair.0, pair.1).unwrap() {
                assert!(m.is_intertwiner());
            }
        }
    }

    /// Conjugating by random invertible change-of-basis matrices per object
    /// must not change intertwiner dimensions.
    #[test]
    fn intertwiner_dim_is_trivialization_invariant() {
        let field = FieldSpec::Prime(5);
        let g = Arc::new(band_groupoid(2, &cyclic_group(2)).unwrap());
        let fam = spanning_family(&g, field);
        let e = fam.reps[0].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut random_invertible = |d: usize| loop {
            let m = Matrix::from_fn(field, d, d, |_, _| {
                field.from_i64(rng.gen_range(0..5))
            });
            if m.is_invertible() {
                return m;
            }
        };
        let baseline = hom_dim(&e, &e).unwrap();
        for _ in 0..3 {
            let ts: Vec<Matrix> = (0..g.n_objects()).map(|_| random_invertible(e.rank())).collect();
            let tinvs: Vec<Matrix> = ts.iter().map(|t| t.inverse().unwrap()).collect();
            let matrices = (0..g.n_arrows())
                .map(|a| ts[g.tgt(a)].mul(e.matrix(a)).mul(&tinvs[g.src(a)]))
                .collect();
            let conj =
                Arc::new(Representation::new(g.clone(), field, e.rank(), matrices).unwrap());
            assert!(validate_rep(&conj).ok());
            assert_eq!(hom_dim(&conj, &conj).unwrap(), baseline);
            assert_eq!(hom_dim(&conj, &e).unwrap(), baseline);
        }
    }

    #[test]
    fn kernel_and_cokernel_of_a_fold_map() {
        let field = FieldSpec::Rational;
        let g = Arc::new(pair_groupoid(2));
        let i = Arc::new(trivial_rep(&g, field));
        let ii = Arc::new(direct_sum(&i, &i).unwrap());
        // fold: 𝓘⊕𝓘 → 𝓘, (a,b) ↦ a+b
        let fold = RepMorphism {
            source: ii.clone(),
            target: i.clone(),
            components: (0..2).map(|_| Matrix::from_i64(field, &[&[1, 1]])).collect(),
        };
        assert!(fold.is_intertwiner());
        let kc = kernel_cokernel(&fold).unwrap();
        assert_eq!(kc.kernel.rank(), 1);
        assert_eq!(kc.cokernel.rank(), 0);
        assert!(validate_rep(&kc.kernel).ok());
        assert!(kc.inclusion.is_intertwiner());
        assert!(kc.projection.is_intertwiner());

        // diagonal: 𝓘 → 𝓘⊕𝓘 has kernel 0 and cokernel of rank 1
        let diag = RepMorphism {
            source: i.clone(),
            target: ii.clone(),
            components: (0..2).map(|_| Matrix::from_i64(field, &[&[1], &[1]])).collect(),
        };
        let kc = kernel_cokernel(&diag).unwrap();
        assert_eq!(kc.kernel.rank(), 0);
        assert_eq!(kc.cokernel.rank(), 1);
        assert!(validate_rep(&kc.cokernel).ok());
        // projection ∘ diagonal = 0
        for x in 0..2 {
            assert!(kc.projection.components[x].mul(&diag.components[x]).is_zero());
        }
    }

    #[test]
    fn restriction_is_functorial_and_constant_for_action_projection() {
        let field = FieldSpec::Rational;
        let (z3, act) = translation_action(3);
        let z3 = Arc::new(z3);
        let ag = Arc::new(action_groupoid(&z3, &act).unwrap());
        // projection: arrow (h, p) ↦ h, every object to the point
        let pr = GroupoidMorphism {
            dom: ag.clone(),
            cod: z3.clone(),
            object_map: vec![0; 3],
            arrow_map: (0..ag.n_arrows()).map(|a| a / 3).collect(),
        };
        assert!(validate_morphism(&pr).is_empty());
        let reg = regular_rep(&z3, field).unwrap();
        let restricted = restrict_along(&pr, &reg).unwrap();
        assert!(validate_rep(&restricted).ok());
        // matrices are constant in the point coordinate
        for h in 0..3 {
            for p in 0..3 {
                assert_eq!(restricted.matrix(h * 3 + p), reg.matrix(h));
            }
        }
        // restriction along the identity is the identity
        let id = GroupoidMorphism::identity(&ag);
        assert_eq!(restrict_along(&id, &restricted).unwrap(), restricted);
        // trivial restricts to trivial
        assert_eq!(
            restrict_along(&pr, &trivial_rep(&z3, field)).unwrap(),
            trivial_rep(&ag, field)
        );
    }

    #[test]
    fn sections_tensor_iso_is_monoidal() {
        let field = FieldSpec::Rational;
        // unit_groupoid(2) has End(𝓘) of dimension 2: a genuinely non-scalar
        // intertwiner exercises the naturality square.
        let g = Arc::new(unit_groupoid(2));
        let i = Arc::new(trivial_rep(&g, field));
        let ii = Arc::new(direct_sum(&i, &i).unwrap());
        let homs = intertwiner_space(&ii, &ii).unwrap();
        assert!(homs.len() >= 2);
        for alpha in homs.iter().take(3) {
            for beta in homs.iter().take(3) {
                // ψ ∘ (ω(α) ⊗ ω(β)) = ω(α ⊗ β) ∘ ψ
                let lhs = sections_tensor_iso(&alpha.target, &beta.target)
                    .mul(&sections_map_tensor(alpha, beta));
                let tensor_morphism = RepMorphism {
                    source: Arc::new(tensor_rep(&alpha.source, &beta.source).unwrap()),
                    target: Arc::new(tensor_rep(&alpha.target, &beta.target).unwrap()),
                    components: (0..g.n_objects())
                        .map(|x| {
                            alpha.components[x].kron(&beta.components[x]).unwrap()
                        })
                        .collect(),
                };
                let rhs = sections_map(&tensor_morphism)
                    .mul(&sections_tensor_iso(&alpha.source, &beta.source));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn sections_tensor_iso_round_trips() {
        let field = FieldSpec::Prime(5);
        let g = Arc::new(band_groupoid(2, &cyclic_group(2)).unwrap());
        let fam = spanning_family(&g, field);
        let e = &fam.reps[0];
        let psi = sections_tensor_iso(e, e);
        // ψ is a permutation matrix: ψᵀψ = I and ψψᵀ = I
        assert!(psi.transpose().mul(&psi).is_identity());
        assert!(psi.mul(&psi.transpose()).is_identity());
        // dimension count: n · d_E · d_F on both sides
        assert_eq!(psi.rows(), 2 * 2 * 2);
        assert_eq!(psi.cols(), 8);
    }

    #[test]
    fn base_change_injectivity_reports() {
        let field = FieldSpec::Rational;
        // transitive: injective
        let g = Arc::new(pair_groupoid(3));
        let i = Arc::new(trivial_rep(&g, field));
        let r = hom_base_change_injectivity(&i, &i).unwrap();
        assert_eq!((r.hom_dim, r.domain_dim, r.rank, r.injective), (1, 3, 3, true));

        // regular rep of Z/2: domain dimension 2, injective
        let z2 = Arc::new(cyclic_group(2));
        let reg = regular_rep(&z2, field).unwrap();
        let r = hom_base_change_injectivity(&reg, &reg).unwrap();
        assert_eq!((r.hom_dim, r.domain_dim, r.injective), (2, 2, true));

        // disconnected: the canonical map has a kernel, reported honestly
        let g = Arc::new(disjoint_union(&pair_groupoid(2), &cyclic_group(2)));
        let i = Arc::new(trivial_rep(&g, field));
        let r = hom_base_change_injectivity(&i, &i).unwrap();
        assert_eq!((r.hom_dim, r.domain_dim, r.rank, r.injective), (2, 6, 3, false));

        // Hom = 0: trivially injective with rank 0
        let fam = spanning_family(&Arc::new(band_groupoid(2, &cyclic_group(2)).unwrap()), field);
        let e = &fam.reps[0];
        let band = e.groupoid().clone();
        let hom_to_zero = hom_base_change_injectivity(
            e,
            &Arc::new(
                Representation::new(band.clone(), field, 0, vec![Matrix::zeros(field, 0, 0); band.n_arrows()])
                    .unwrap(),
            ),
        )
        .unwrap();
        assert_eq!((hom_to_zero.hom_dim, hom_to_zero.rank, hom_to_zero.injective), (0, 0, true));
    }

    #[test]
    fn fiberwise_surjection_gives_surjective_sections_map() {
        let field = FieldSpec::Rational;
        let g = Arc::new(pair_groupoid(2));
        let i = Arc::new(trivial_rep(&g, field));
        let ii = Arc::new(direct_sum(&i, &i).unwrap());
        let fold = RepMorphism {
            source: ii.clone(),
            target: i.clone(),
            components: (0..2).map(|_| Matrix::from_i64(field, &[&[1, 1]])).collect(),
        };
        assert!(fold.is_fiberwise_surjective());
        let omega = sections_map(&fold);
        assert_eq!(omega.rank(), omega.rows()); // surjective on sections
    }

    #[test]
    fn dual_basis_reconstruction_on_random_sections() {
        // free-module identity s = Σ sᵢ*(s)·sᵢ, via explicit coordinates
        let field = FieldSpec::Rational;
        let g = Arc::new(pair_groupoid(3));
        let fam = spanning_family(&g, field);
        let e = &fam.reps[0];
        let dim = global_sections(e).dim;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let s: Vec<Scalar> =
                (0..dim).map(|_| field.from_i64(rng.gen_range(-9..10))).collect();
            let mut rebuilt = vec![field.zero(); dim];
            for (i, si) in s.iter().enumerate() {
                // sᵢ*(s) = coordinate i; sᵢ = basis vector i
                rebuilt[i] = rebuilt[i].clone().add(si);
            }
            assert_eq!(rebuilt, s);
        }
    }

    #[test]
    fn seeded_mutations_break_validation() {
        let field = FieldSpec::Prime(5);
        let g = Arc::new(band_groupoid(2, &cyclic_group(2)).unwrap());
        let fam = spanning_family(&g, field);
        let e = &fam.reps[0];
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut caught = 0;
        for _ in 0..20 {
            let a = rng.gen_range(0..g.n_arrows());
            let r = rng.gen_range(0..e.rank());
            let c = rng.gen_range(0..e.rank());
            let delta = field.from_i64(rng.gen_range(1..5));
            let mut matrices = e.matrices().to_vec();
            let bumped = matrices[a].get(r, c).clone().add(&delta);
            matrices[a].set(r, c, bumped);
            let mutated =
                Representation::new(g.clone(), field, e.rank(), matrices).unwrap();
            let report = validate_rep(&mutated);
            assert!(!report.ok(), "mutation at arrow {a} ({r},{c}) undetected");
            caught += 1;
        }
        assert_eq!(caught, 20);

        // a non-invertible matrix is caught by the invertibility clause
        let mut matrices = e.matrices().to_vec();
        matrices[0] = Matrix::zeros(field, e.rank(), e.rank());
        let mutated = Representation::new(g.clone(), field, e.rank(), matrices).unwrap();
        let report = validate_rep(&mutated);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, RepViolation::Invertibility { .. })));
    }
}
