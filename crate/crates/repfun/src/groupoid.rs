//! Finite groupoids as explicit tables, with validated builders.
//!
//! A groupoid is stored as object and arrow lists plus three tables: a partial
//! composition table (`compose(g, f)` means "g after f" and must be defined
//! exactly when `src(g) == tgt(f)`), an identity arrow per object, and an
//! inverse per arrow. Builders produce common families (unit, pair, band,
//! action, induced, disjoint unions); [`validate_groupoid`] checks every axiom
//! on every tuple and reports each failure with a concrete witness.

use crate::par;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite groupoid given by tables. Construction only checks that indices
/// are in range (dangling ids are malformed input, not an axiom failure);
/// axiom checking is [`validate_groupoid`]'s job.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    compose: Vec<Option<u32>>, // row-major: [g * n_arrows + f]
    identity: Vec<u32>,        // per object
    inverse: Vec<u32>,         // per arrow
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GroupoidError {
    #[error("malformed groupoid: {0}")]
    Malformed(String),
    #[error("expected a one-object groupoid (a group), found {objects} objects")]
    NotAGroup { objects: usize },
    #[error("object index {index} out of range ({count} objects)")]
    ObjectOutOfRange { index: usize, count: usize },
    #[error("enumeration guard exceeded: {arrows} arrows in the domain, guard {guard}")]
    GuardExceeded { arrows: usize, guard: usize },
    #[error("{0}")]
    InvalidAction(String),
}

/// One violated axiom together with the tuple that witnesses it.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub enum GroupoidViolation {
    /// identity arrow of `object` does not have it as both endpoints
    IdentityEndpoints { object: usize },
    /// compose(g, f) is defined although src(g) != tgt(f)
    SpuriousComposite { g: usize, f: usize },
    /// src(g) == tgt(f) but compose(g, f) is undefined
    MissingComposite { g: usize, f: usize },
    /// compose(g, f) has wrong endpoints
    CompositeEndpoints { g: usize, f: usize },
    /// compose(g, identity(src g)) != g
    RightUnit { g: usize },
    /// compose(identity(tgt g), g) != g
    LeftUnit { g: usize },
    /// (g.f).e != g.(f.e)
    Associativity { g: usize, f: usize, e: usize },
    /// inverse(g) does not have swapped endpoints
    InverseEndpoints { g: usize },
    /// compose(inverse(g), g) or compose(g, inverse(g)) is not an identity
    InverseLaw { g: usize },
}

/// Outcome of checking every groupoid axiom; `ok()` iff no violations.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GroupoidReport {
    pub violations: Vec<GroupoidViolation>,
}

impl GroupoidReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FiniteGroupoid {
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        compose_entries: Vec<(usize, usize, usize)>,
        identity: Vec<usize>,
        inverse: Vec<usize>,
    ) -> Result<FiniteGroupoid, GroupoidError> {
        let n_obj = objects.len();
        let n_arr = arrows.len();
        if n_obj == 0 {
            return Err(GroupoidError::Malformed("no objects".into()));
        }
        for (i, a) in arrows.iter().enumerate() {
            if a.src >= n_obj || a.tgt >= n_obj {
                return Err(GroupoidError::Malformed(format!(
                    "arrow {i} ({}) has endpoint out of range",
                    a.name
                )));
            }
        }
        if identity.len() != n_obj {
            return Err(GroupoidError::Malformed("identity table length mismatch".into()));
        }
        if inverse.len() != n_arr {
            return Err(GroupoidError::Malformed("inverse table length mismatch".into()));
        }
        if let Some(&bad) = identity.iter().find(|&&a| a >= n_arr) {
            return Err(GroupoidError::Malformed(format!("identity arrow {bad} out of range")));
        }
        if let Some(&bad) = inverse.iter().find(|&&a| a >= n_arr) {
            return Err(GroupoidError::Malformed(format!("inverse arrow {bad} out of range")));
        }
        let mut compose = vec![None; n_arr * n_arr];
        for (g, f, gf) in compose_entries {
            if g >= n_arr || f >= n_arr || gf >= n_arr {
                return Err(GroupoidError::Malformed(format!(
                    "composition entry ({g}, {f}, {gf}) points outside the arrow list"
                )));
            }
            let slot = &mut compose[g * n_arr + f];
            if slot.is_some() {
                return Err(GroupoidError::Malformed(format!(
                    "duplicate composition entry for ({g}, {f})"
                )));
            }
            *slot = Some(gf as u32);
        }
        Ok(FiniteGroupoid {
            objects,
            arrows,
            compose,
            identity: identity.into_iter().map(|a| a as u32).collect(),
            inverse: inverse.into_iter().map(|a| a as u32).collect(),
        })
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn arrow(&self, g: usize) -> &Arrow {
        &self.arrows[g]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn src(&self, g: usize) -> usize {
        self.arrows[g].src
    }

    pub fn tgt(&self, g: usize) -> usize {
        self.arrows[g].tgt
    }

    /// "g after f"; defined iff `src(g) == tgt(f)` in a valid groupoid.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose[g * self.arrows.len() + f].map(|a| a as usize)
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x] as usize
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g] as usize
    }

    pub fn is_identity(&self, g: usize) -> bool {
        self.identity[self.arrows[g].src] as usize == g && self.arrows[g].src == self.arrows[g].tgt
    }

    /// All pairs `(g, f)` with `src(g) == tgt(f)`, lexicographic.
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let m = self.arrows.len();
        let mut out = Vec::new();
        for g in 0..m {
            for f in 0..m {
                if self.src(g) == self.tgt(f) {
                    out.push((g, f));
                }
            }
        }
        out
    }

    pub fn loops_at(&self, x: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&g| self.src(g) == x && self.tgt(g) == x)
            .collect()
    }

    /// True when some arrow joins every ordered pair of objects.
    pub fn is_transitive(&self) -> bool {
        let n = self.objects.len();
        let mut seen = vec![false; n * n];
        for a in &self.arrows {
            seen[a.tgt * n + a.src] = true;
        }
        seen.into_iter().all(|b| b)
    }
}

/// Checks every axiom on every applicable tuple; the triple loop for
/// associativity is the hot path and runs data-parallel.
pub fn validate_groupoid(g: &FiniteGroupoid) -> GroupoidReport {
    let m = g.n_arrows();
    let mut violations = Vec::new();

    for x in 0..g.n_objects() {
        let e = g.identity(x);
        if g.src(e) != x || g.tgt(e) != x {
            violations.push(GroupoidViolation::IdentityEndpoints { object: x });
        }
    }

    // Domain of definition, endpoint compatibility, unit and inverse laws:
    // one pass per arrow pair / arrow, parallel over the first index.
    let pair_violations = par::map_range(m, |a| {
        let mut local = Vec::new();
        for f in 0..m {
            let composable = g.src(a) == g.tgt(f);
            match g.compose(a, f) {
                Some(af) => {
                    if !composable {
                        local.push(GroupoidViolation::SpuriousComposite { g: a, f });
                    } else if g.src(af) != g.src(f) || g.tgt(af) != g.tgt(a) {
                        local.push(GroupoidViolation::CompositeEndpoints { g: a, f });
                    }
                }
                None => {
                    if composable {
                        local.push(GroupoidViolation::MissingComposite { g: a, f });
                    }
                }
            }
        }
        let src_id = g.identity(g.src(a));
        if g.compose(a, src_id) != Some(a) {
            local.push(GroupoidViolation::RightUnit { g: a });
        }
        let tgt_id = g.identity(g.tgt(a));
        if g.compose(tgt_id, a) != Some(a) {
            local.push(GroupoidViolation::LeftUnit { g: a });
        }
        let inv = g.inverse(a);
        if g.src(inv) != g.tgt(a) || g.tgt(inv) != g.src(a) {
            local.push(GroupoidViolation::InverseEndpoints { g: a });
        } else {
            let left = g.compose(inv, a);
            let right = g.compose(a, inv);
            if left != Some(g.identity(g.src(a))) || right != Some(g.identity(g.tgt(a))) {
                local.push(GroupoidViolation::InverseLaw { g: a });
            }
        }
        local
    });
    violations.extend(pair_violations.into_iter().flatten());

    // Associativity over every composable triple.
    let assoc = par::map_range(m, |a| {
        let mut local = Vec::new();
        for f in 0..m {
            if g.src(a) != g.tgt(f) {
                continue;
            }
            for e in 0..m {
                if g.src(f) != g.tgt(e) {
                    continue;
                }
                let left = g.compose(a, f).and_then(|af| g.compose(af, e));
                let right = g.compose(f, e).and_then(|fe| g.compose(a, fe));
                if left != right || left.is_none() {
                    local.push(GroupoidViolation::Associativity { g: a, f, e });
                }
            }
        }
        local
    });
    violations.extend(assoc.into_iter().flatten());

    GroupoidReport { violations }
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

/// Disjoint identities: `n` objects, only identity arrows.
pub fn unit_groupoid(n: usize) -> FiniteGroupoid {
    let objects: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let arrows: Vec<Arrow> = (0..n)
        .map(|i| Arrow { name: format!("id_x{i}"), src: i, tgt: i })
        .collect();
    let compose = (0..n).map(|i| (i, i, i)).collect();
    FiniteGroupoid::new(objects, arrows, compose, (0..n).collect(), (0..n).collect())
        .expect("unit groupoid tables")
}

/// One arrow `x -> y` for every ordered pair: arrow `(y, x)` has src `x` and
/// tgt `y`; `compose((z,y), (y,x)) = (z,x)`.
pub fn pair_groupoid(n: usize) -> FiniteGroupoid {
    let objects: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut arrows = Vec::with_capacity(n * n);
    let idx = |y: usize, x: usize| y * n + x;
    for y in 0..n {
        for x in 0..n {
            arrows.push(Arrow { name: format!("p{y}{x}"), src: x, tgt: y });
        }
    }
    let mut compose = Vec::new();
    for z in 0..n {
        for y in 0..n {
            for x in 0..n {
                compose.push((idx(z, y), idx(y, x), idx(z, x)));
            }
        }
    }
    let identity = (0..n).map(|x| idx(x, x)).collect();
    let inverse = (0..n * n).map(|a| idx(a % n, a / n)).collect();
    FiniteGroupoid::new(objects, arrows, compose, identity, inverse).expect("pair groupoid tables")
}

/// A finite group presented as a one-object groupoid, from its multiplication
/// table: `table[g][h]` is the product "g after h". Checks the group axioms
/// by validating the resulting groupoid.
pub fn group_from_table(
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    unit: usize,
) -> Result<FiniteGroupoid, GroupoidError> {
    let n = labels.len();
    if table.len() != n || table.iter().any(|row| row.len() != n) {
        return Err(GroupoidError::Malformed("multiplication table is not n x n".into()));
    }
    if unit >= n {
        return Err(GroupoidError::Malformed("unit element out of range".into()));
    }
    let arrows = labels
        .iter()
        .map(|l| Arrow { name: l.clone(), src: 0, tgt: 0 })
        .collect();
    let mut compose = Vec::with_capacity(n * n);
    let mut inverse = vec![None; n];
    for g in 0..n {
        for h in 0..n {
            let gh = table[g][h];
            if gh >= n {
                return Err(GroupoidError::Malformed(format!(
                    "table entry ({g}, {h}) out of range"
                )));
            }
            compose.push((g, h, gh));
            if gh == unit && inverse[g].is_none() {
                inverse[g] = Some(h);
            }
        }
    }
    let inverse: Vec<usize> = inverse
        .into_iter()
        .enumerate()
        .map(|(g, i)| i.ok_or(GroupoidError::Malformed(format!("element {g} has no inverse"))))
        .collect::<Result<_, _>>()?;
    let gpd = FiniteGroupoid::new(vec!["*".into()], arrows, compose, vec![unit], inverse)?;
    let report = validate_groupoid(&gpd);
    if !report.ok() {
        return Err(GroupoidError::Malformed(format!(
            "multiplication table violates the group axioms: {:?}",
            report.violations[0]
        )));
    }
    Ok(gpd)
}

/// The cyclic group Z/n as a one-object groupoid.
pub fn cyclic_group(n: usize) -> FiniteGroupoid {
    let labels = (0..n).map(|i| format!("g{i}")).collect();
    let table = (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect();
    group_from_table(labels, table, 0).expect("cyclic group table")
}

/// The symmetric group on three letters, by composing permutations.
pub fn symmetric_group_3() -> FiniteGroupoid {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [1, 0, 2],
        [0, 2, 1],
        [2, 1, 0],
        [1, 2, 0],
        [2, 0, 1],
    ];
    let label = |p: &[usize; 3]| format!("s{}{}{}", p[0], p[1], p[2]);
    let index = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
    let table = perms
        .iter()
        .map(|a| {
            perms
                .iter()
                .map(|b| index(&[a[b[0]], a[b[1]], a[b[2]]])) // "a after b"
                .collect()
        })
        .collect();
    group_from_table(perms.iter().map(label).collect(), table, 0).expect("S3 table")
}

/// Band groupoid on `n` points over a group: arrows are `(y, h, x)` read as
/// `x -> y` carrying `h`, with `(z, k, y) . (y, h, x) = (z, kh, x)`.
pub fn band_groupoid(n: usize, group: &FiniteGroupoid) -> Result<FiniteGroupoid, GroupoidError> {
    if group.n_objects() != 1 {
        return Err(GroupoidError::NotAGroup { objects: group.n_objects() });
    }
    let m = group.n_arrows();
    let objects: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let idx = |y: usize, h: usize, x: usize| (y * m + h) * n + x;
    let mut arrows = Vec::with_capacity(n * n * m);
    for y in 0..n {
        for h in 0..m {
            for x in 0..n {
                arrows.push(Arrow {
                    name: format!("b{y}.{}.{x}", group.arrow(h).name),
                    src: x,
                    tgt: y,
                });
            }
        }
    }
    let mut compose = Vec::new();
    for z in 0..n {
        for k in 0..m {
            for y in 0..n {
                for h in 0..m {
                    for x in 0..n {
                        let kh = group.compose(k, h).expect("group is total");
                        compose.push((idx(z, k, y), idx(y, h, x), idx(z, kh, x)));
                    }
                }
            }
        }
    }
    let e = group.identity(0);
    let identity = (0..n).map(|x| idx(x, e, x)).collect();
    let inverse = (0..n * n * m)
        .map(|a| {
            let x = a % n;
            let h = (a / n) % m;
            let y = a / (n * m);
            idx(x, group.inverse(h), y)
        })
        .collect();
    FiniteGroupoid::new(objects, arrows, compose, identity, inverse)
}

/// Action groupoid of a group acting on points: `action[h][p]` is `h . p`.
/// Arrows are `(h, p)` from `p` to `h . p`.
pub fn action_groupoid(
    group: &FiniteGroupoid,
    action: &[Vec<usize>],
) -> Result<FiniteGroupoid, GroupoidError> {
    if group.n_objects() != 1 {
        return Err(GroupoidError::NotAGroup { objects: group.n_objects() });
    }
    let m = group.n_arrows();
    if action.len() != m {
        return Err(GroupoidError::InvalidAction(
            "action table must have one row per group element".into(),
        ));
    }
    let n = action.first().map_or(0, |row| row.len());
    if n == 0 || action.iter().any(|row| row.len() != n) {
        return Err(GroupoidError::InvalidAction("action rows must be equal nonempty".into()));
    }
    for row in action {
        if row.iter().any(|&p| p >= n) {
            return Err(GroupoidError::InvalidAction("action value out of range".into()));
        }
    }
    let e = group.identity(0);
    if (0..n).any(|p| action[e][p] != p) {
        return Err(GroupoidError::InvalidAction("identity must act trivially".into()));
    }
    for k in 0..m {
        for h in 0..m {
            let kh = group.compose(k, h).expect("group is total");
            if (0..n).any(|p| action[k][action[h][p]] != action[kh][p]) {
                return Err(GroupoidError::InvalidAction(format!(
                    "action is not compatible with multiplication at ({k}, {h})"
                )));
            }
        }
    }
    let objects: Vec<String> = (0..n).map(|p| format!("p{p}")).collect();
    let idx = |h: usize, p: usize| h * n + p;
    let arrows = (0..m)
        .flat_map(|h| {
            (0..n).map(move |p| (h, p))
        })
        .map(|(h, p)| Arrow {
            name: format!("a{}.p{p}", group.arrow(h).name),
            src: p,
            tgt: action[h][p],
        })
        .collect();
    let mut compose = Vec::new();
    for k in 0..m {
        for h in 0..m {
            for p in 0..n {
                // (k, h.p) after (h, p) = (kh, p)
                let kh = group.compose(k, h).expect("group is total");
                compose.push((idx(k, action[h][p]), idx(h, p), idx(kh, p)));
            }
        }
    }
    let identity = (0..n).map(|p| idx(e, p)).collect();
    let inverse = (0..m)
        .flat_map(|h| (0..n).map(move |p| (h, p)))
        .map(|(h, p)| idx(group.inverse(h), action[h][p]))
        .collect();
    FiniteGroupoid::new(objects, arrows, compose, identity, inverse)
}

/// Translation action of Z/n on itself.
pub fn translation_action(n: usize) -> (FiniteGroupoid, Vec<Vec<usize>>) {
    let group = cyclic_group(n);
    let action = (0..n)
        .map(|g| (0..n).map(|p| (g + p) % n).collect())
        .collect();
    (group, action)
}

/// Renames nothing, shares nothing: plain disjoint union of two groupoids.
pub fn disjoint_union(a: &FiniteGroupoid, b: &FiniteGroupoid) -> FiniteGroupoid {
    let n_obj = a.n_objects();
    let n_arr = a.n_arrows();
    let mut objects: Vec<String> = a.objects.iter().map(|s| format!("l.{s}")).collect();
    objects.extend(b.objects.iter().map(|s| format!("r.{s}")));
    let mut arrows: Vec<Arrow> = a
        .arrows
        .iter()
        .map(|ar| Arrow { name: format!("l.{}", ar.name), src: ar.src, tgt: ar.tgt })
        .collect();
    arrows.extend(b.arrows.iter().map(|ar| Arrow {
        name: format!("r.{}", ar.name),
        src: ar.src + n_obj,
        tgt: ar.tgt + n_obj,
    }));
    let mut compose = Vec::new();
    for g in 0..a.n_arrows() {
        for f in 0..a.n_arrows() {
            if let Some(gf) = a.compose(g, f) {
                compose.push((g, f, gf));
            }
        }
    }
    for g in 0..b.n_arrows() {
        for f in 0..b.n_arrows() {
            if let Some(gf) = b.compose(g, f) {
                compose.push((g + n_arr, f + n_arr, gf + n_arr));
            }
        }
    }
    let mut identity: Vec<usize> = a.identity.iter().map(|&i| i as usize).collect();
    identity.extend(b.identity.iter().map(|&i| i as usize + n_arr));
    let mut inverse: Vec<usize> = a.inverse.iter().map(|&i| i as usize).collect();
    inverse.extend(b.inverse.iter().map(|&i| i as usize + n_arr));
    FiniteGroupoid::new(objects, arrows, compose, identity, inverse).expect("disjoint union tables")
}

// ---------------------------------------------------------------------------
// Morphisms
// ---------------------------------------------------------------------------

/// A functor between finite groupoids, as explicit object and arrow maps.
#[derive(Clone, Debug)]
pub struct GroupoidMorphism {
    pub dom: Arc<FiniteGroupoid>,
    pub cod: Arc<FiniteGroupoid>,
    pub object_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

impl PartialEq for GroupoidMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.dom == other.dom
            && self.cod == other.cod
            && self.object_map == other.object_map
            && self.arrow_map == other.arrow_map
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub enum MorphismViolation {
    ObjectOutOfRange { object: usize },
    ArrowOutOfRange { arrow: usize },
    /// image arrow endpoints disagree with the mapped endpoints
    Endpoints { arrow: usize },
    Identity { object: usize },
    Composition { g: usize, f: usize },
}

impl GroupoidMorphism {
    pub fn identity(g: &Arc<FiniteGroupoid>) -> GroupoidMorphism {
        GroupoidMorphism {
            dom: g.clone(),
            cod: g.clone(),
            object_map: (0..g.n_objects()).collect(),
            arrow_map: (0..g.n_arrows()).collect(),
        }
    }

    /// `other` after `self` (self first): a functor dom(self) -> cod(other).
    pub fn then(&self, other: &GroupoidMorphism) -> GroupoidMorphism {
        assert_eq!(self.cod, other.dom, "composing morphisms across different groupoids");
        GroupoidMorphism {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            object_map: self.object_map.iter().map(|&x| other.object_map[x]).collect(),
            arrow_map: self.arrow_map.iter().map(|&g| other.arrow_map[g]).collect(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        let obj_ok = self.object_map.len() == self.cod.n_objects() && {
            let mut seen = vec![false; self.cod.n_objects()];
            self.object_map.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
        };
        let arr_ok = self.arrow_map.len() == self.cod.n_arrows() && {
            let mut seen = vec![false; self.cod.n_arrows()];
            self.arrow_map.iter().all(|&g| !std::mem::replace(&mut seen[g], true))
        };
        obj_ok && arr_ok
    }
}

/// Functoriality check: endpoints, identities, and all compositions.
pub fn validate_morphism(m: &GroupoidMorphism) -> Vec<MorphismViolation> {
    let mut v = Vec::new();
    let (dom, cod) = (&m.dom, &m.cod);
    if m.object_map.len() != dom.n_objects() {
        v.push(MorphismViolation::ObjectOutOfRange { object: m.object_map.len() });
        return v;
    }
    if m.arrow_map.len() != dom.n_arrows() {
        v.push(MorphismViolation::ArrowOutOfRange { arrow: m.arrow_map.len() });
        return v;
    }
    for (x, &fx) in m.object_map.iter().enumerate() {
        if fx >= cod.n_objects() {
            v.push(MorphismViolation::ObjectOutOfRange { object: x });
        }
    }
    for (g, &fg) in m.arrow_map.iter().enumerate() {
        if fg >= cod.n_arrows() {
            v.push(MorphismViolation::ArrowOutOfRange { arrow: g });
        }
    }
    if !v.is_empty() {
        return v;
    }
    for (g, &fg) in m.arrow_map.iter().enumerate() {
        if cod.src(fg) != m.object_map[dom.src(g)] || cod.tgt(fg) != m.object_map[dom.tgt(g)] {
            v.push(MorphismViolation::Endpoints { arrow: g });
        }
    }
    for x in 0..dom.n_objects() {
        if m.arrow_map[dom.identity(x)] != cod.identity(m.object_map[x]) {
            v.push(MorphismViolation::Identity { object: x });
        }
    }
    for g in 0..dom.n_arrows() {
        for f in 0..dom.n_arrows() {
            if let Some(gf) = dom.compose(g, f) {
                let image = cod.compose(m.arrow_map[g], m.arrow_map[f]);
                if image != Some(m.arrow_map[gf]) {
                    v.push(MorphismViolation::Composition { g, f });
                }
            }
        }
    }
    v
}

// ---------------------------------------------------------------------------
// Components, isotropy, induced groupoids
// ---------------------------------------------------------------------------

/// Connected-component decomposition: label per object plus, per component,
/// the full sub-groupoid and its inclusion.
pub struct Components {
    pub component_of: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    pub subgroupoids: Vec<Arc<FiniteGroupoid>>,
    pub inclusions: Vec<GroupoidMorphism>,
}

pub fn connected_components(g: &Arc<FiniteGroupoid>) -> Components {
    let n = g.n_objects();
    let mut component_of = vec![usize::MAX; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if component_of[start] != usize::MAX {
            continue;
        }
        let c = members.len();
        let mut queue = vec![start];
        component_of[start] = c;
        let mut found = vec![start];
        while let Some(x) = queue.pop() {
            for a in g.arrows() {
                for (p, q) in [(a.src, a.tgt), (a.tgt, a.src)] {
                    if p == x && component_of[q] == usize::MAX {
                        component_of[q] = c;
                        queue.push(q);
                        found.push(q);
                    }
                }
            }
        }
        found.sort_unstable();
        members.push(found);
    }

    let mut subgroupoids = Vec::new();
    let mut inclusions = Vec::new();
    for objs in &members {
        let obj_index: BTreeMap<usize, usize> =
            objs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let arrow_ids: Vec<usize> = (0..g.n_arrows())
            .filter(|&a| obj_index.contains_key(&g.src(a)))
            .collect();
        let arrow_index: BTreeMap<usize, usize> =
            arrow_ids.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let arrows = arrow_ids
            .iter()
            .map(|&a| Arrow {
                name: g.arrow(a).name.clone(),
                src: obj_index[&g.src(a)],
                tgt: obj_index[&g.tgt(a)],
            })
            .collect();
        let mut compose = Vec::new();
        for &a in &arrow_ids {
            for &b in &arrow_ids {
                if let Some(ab) = g.compose(a, b) {
                    compose.push((arrow_index[&a], arrow_index[&b], arrow_index[&ab]));
                }
            }
        }
        let identity = objs.iter().map(|&x| arrow_index[&g.identity(x)]).collect();
        let inverse = arrow_ids.iter().map(|&a| arrow_index[&g.inverse(a)]).collect();
        let sub = Arc::new(
            FiniteGroupoid::new(
                objs.iter().map(|&x| g.object_name(x).to_string()).collect(),
                arrows,
                compose,
                identity,
                inverse,
            )
            .expect("component tables"),
        );
        inclusions.push(GroupoidMorphism {
            dom: sub.clone(),
            cod: g.clone(),
            object_map: objs.clone(),
            arrow_map: arrow_ids,
        });
        subgroupoids.push(sub);
    }
    Components { component_of, members, subgroupoids, inclusions }
}

/// Isotropy group at an object: the loops, as a one-object groupoid, plus its
/// inclusion into the ambient groupoid.
pub fn isotropy_group(
    g: &Arc<FiniteGroupoid>,
    x: usize,
) -> Result<(Arc<FiniteGroupoid>, GroupoidMorphism), GroupoidError> {
    if x >= g.n_objects() {
        return Err(GroupoidError::ObjectOutOfRange { index: x, count: g.n_objects() });
    }
    let loops = g.loops_at(x);
    let index: BTreeMap<usize, usize> = loops.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let arrows = loops
        .iter()
        .map(|&a| Arrow { name: g.arrow(a).name.clone(), src: 0, tgt: 0 })
        .collect();
    let mut compose = Vec::new();
    for &a in &loops {
        for &b in &loops {
            let ab = g.compose(a, b).expect("loops at one object compose");
            compose.push((index[&a], index[&b], index[&ab]));
        }
    }
    let identity = vec![index[&g.identity(x)]];
    let inverse = loops.iter().map(|&a| index[&g.inverse(a)]).collect();
    let group = Arc::new(FiniteGroupoid::new(
        vec![g.object_name(x).to_string()],
        arrows,
        compose,
        identity,
        inverse,
    )?);
    let inclusion = GroupoidMorphism {
        dom: group.clone(),
        cod: g.clone(),
        object_map: vec![x],
        arrow_map: loops,
    };
    Ok((group, inclusion))
}

/// Groupoid induced along `u: P -> Obj(h)`: objects are the points of `P`,
/// arrows are triples `(p, g, q)` with `u(p) = src(g)`, `u(q) = tgt(g)`,
/// read as `p -> q`. Returns it with the canonical projection to `h`.
pub fn induced_groupoid(
    h: &Arc<FiniteGroupoid>,
    u: &[usize],
) -> Result<(Arc<FiniteGroupoid>, GroupoidMorphism), GroupoidError> {
    if u.is_empty() {
        return Err(GroupoidError::Malformed("induced groupoid needs at least one point".into()));
    }
    for &x in u {
        if x >= h.n_objects() {
            return Err(GroupoidError::ObjectOutOfRange { index: x, count: h.n_objects() });
        }
    }
    let np = u.len();
    let objects: Vec<String> = (0..np).map(|p| format!("q{p}")).collect();
    let mut arrows = Vec::new();
    let mut underlying = Vec::new();
    let mut index = BTreeMap::new();
    for p in 0..np {
        for g in 0..h.n_arrows() {
            for q in 0..np {
                if u[p] == h.src(g) && u[q] == h.tgt(g) {
                    index.insert((p, g, q), arrows.len());
                    underlying.push(g);
                    arrows.push(Arrow {
                        name: format!("i{p}.{}.{q}", h.arrow(g).name),
                        src: p,
                        tgt: q,
                    });
                }
            }
        }
    }
    let mut compose = Vec::new();
    for (&(p1, g1, q1), &a1) in &index {
        for (&(p2, g2, q2), &a2) in &index {
            // a1 after a2 requires src(a1) = tgt(a2), i.e. p1 == q2.
            if p1 == q2 {
                let g = h.compose(g1, g2).expect("underlying arrows compose");
                compose.push((a1, a2, index[&(p2, g, q1)]));
            }
        }
    }
    let identity = (0..np).map(|p| index[&(p, h.identity(u[p]), p)]).collect();
    let inverse = index
        .iter()
        .map(|(&(p, g, q), _)| index[&(q, h.inverse(g), p)])
        .collect::<Vec<_>>();
    // index iteration order is by key, which matches arrow insertion order
    // only by construction; rebuild positionally to be safe.
    let mut inverse_by_arrow = vec![0usize; arrows.len()];
    for ((&(p, g, q), &a), inv) in index.iter().zip(inverse) {
        let _ = (p, g, q);
        inverse_by_arrow[a] = inv;
    }
    let induced = Arc::new(FiniteGroupoid::new(
        objects,
        arrows,
        compose,
        identity,
        inverse_by_arrow,
    )?);
    let projection = GroupoidMorphism {
        dom: induced.clone(),
        cod: h.clone(),
        object_map: u.to_vec(),
        arrow_map: underlying,
    };
    Ok((induced, projection))
}

/// Exhaustive functor enumeration by backtracking over arrow images, gated by
/// a guard on the domain size. Identity arrows are forced; every composition
/// is checked before an assignment survives.
pub fn enumerate_morphisms(
    dom: &Arc<FiniteGroupoid>,
    cod: &Arc<FiniteGroupoid>,
    guard: usize,
) -> Result<Vec<GroupoidMorphism>, GroupoidError> {
    if dom.n_arrows() > guard {
        return Err(GroupoidError::GuardExceeded { arrows: dom.n_arrows(), guard });
    }
    let mut results = Vec::new();
    let n_obj = dom.n_objects();
    let mut object_map = vec![0usize; n_obj];
    enumerate_objects(dom, cod, 0, &mut object_map, &mut results);
    Ok(results)
}

fn enumerate_objects(
    dom: &Arc<FiniteGroupoid>,
    cod: &Arc<FiniteGroupoid>,
    next: usize,
    object_map: &mut Vec<usize>,
    results: &mut Vec<GroupoidMorphism>,
) {
    if next == dom.n_objects() {
        let mut arrow_map = vec![usize::MAX; dom.n_arrows()];
        for x in 0..dom.n_objects() {
            arrow_map[dom.identity(x)] = cod.identity(object_map[x]);
        }
        let free: Vec<usize> = (0..dom.n_arrows()).filter(|&g| arrow_map[g] == usize::MAX).collect();
        enumerate_arrows(dom, cod, &free, 0, object_map, &mut arrow_map, results);
        return;
    }
    for y in 0..cod.n_objects() {
        object_map[next] = y;
        enumerate_objects(dom, cod, next + 1, object_map, results);
    }
    object_map[next] = 0;
}

fn enumerate_arrows(
    dom: &Arc<FiniteGroupoid>,
    cod: &Arc<FiniteGroupoid>,
    free: &[usize],
    pos: usize,
    object_map: &[usize],
    arrow_map: &mut Vec<usize>,
    results: &mut Vec<GroupoidMorphism>,
) {
    if pos == free.len() {
        let candidate = GroupoidMorphism {
            dom: dom.clone(),
            cod: cod.clone(),
            object_map: object_map.to_vec(),
            arrow_map: arrow_map.clone(),
        };
        if validate_morphism(&candidate).is_empty() {
            results.push(candidate);
        }
        return;
    }
    let g = free[pos];
    for image in 0..cod.n_arrows() {
        if cod.src(image) != object_map[dom.src(g)] || cod.tgt(image) != object_map[dom.tgt(g)] {
            continue;
        }
        arrow_map[g] = image;
        // Prune: every composition among already-assigned arrows must hold.
        if partial_compositions_hold(dom, cod, arrow_map) {
            enumerate_arrows(dom, cod, free, pos + 1, object_map, arrow_map, results);
        }
    }
    arrow_map[g] = usize::MAX;
}

fn partial_compositions_hold(
    dom: &Arc<FiniteGroupoid>,
    cod: &Arc<FiniteGroupoid>,
    arrow_map: &[usize],
) -> bool {
    for g in 0..dom.n_arrows() {
        if arrow_map[g] == usize::MAX {
            continue;
        }
        for f in 0..dom.n_arrows() {
            if arrow_map[f] == usize::MAX {
                continue;
            }
            if let Some(gf) = dom.compose(g, f) {
                if arrow_map[gf] == usize::MAX {
                    continue;
                }
                if cod.compose(arrow_map[g], arrow_map[f]) != Some(arrow_map[gf]) {
                    return false;
                }
            }
        }
    }
    true
}

/// The diagonal embedding of the unit groupoid into the pair groupoid on the
/// same `n` points: object `x` to `x`, its identity to the pair `(x, x)`.
pub fn diagonal_embedding(n: usize) -> (Arc<FiniteGroupoid>, Arc<FiniteGroupoid>, GroupoidMorphism) {
    let unit = Arc::new(unit_groupoid(n));
    let pair = Arc::new(pair_groupoid(n));
    let morphism = GroupoidMorphism {
        dom: unit.clone(),
        cod: pair.clone(),
        object_map: (0..n).collect(),
        arrow_map: (0..n).map(|x| x * n + x).collect(),
    };
    (unit, pair, morphism)
}

/// The projection of an action groupoid onto the acting group: the arrow
/// `(h, p)` maps to `h`, every point to the group's one object.
pub fn action_projection(
    group: &Arc<FiniteGroupoid>,
    action: &[Vec<usize>],
) -> Result<(Arc<FiniteGroupoid>, GroupoidMorphism), GroupoidError> {
    let act = Arc::new(action_groupoid(group, action)?);
    let n = act.n_objects();
    let m = group.n_arrows();
    let morphism = GroupoidMorphism {
        dom: act.clone(),
        cod: group.clone(),
        object_map: vec![0; n],
        arrow_map: (0..m).flat_map(|h| (0..n).map(move |_| h)).collect(),
    };
    Ok((act, morphism))
}

/// The automorphism of a band groupoid induced by a permutation `sigma` of
/// its points: `(y, h, x)` maps to `(sigma(y), h, sigma(x))`.
pub fn band_automorphism(
    band: &Arc<FiniteGroupoid>,
    n: usize,
    group_order: usize,
    sigma: &[usize],
) -> Result<GroupoidMorphism, GroupoidError> {
    if band.n_objects() != n || band.n_arrows() != n * n * group_order {
        return Err(GroupoidError::Malformed(
            "band shape does not match the given point count and group order".into(),
        ));
    }
    if sigma.len() != n {
        return Err(GroupoidError::Malformed("permutation length must match the points".into()));
    }
    let mut seen = vec![false; n];
    for &s in sigma {
        if s >= n || seen[s] {
            return Err(GroupoidError::Malformed("not a permutation of the points".into()));
        }
        seen[s] = true;
    }
    let idx = |y: usize, h: usize, x: usize| (y * group_order + h) * n + x;
    let mut arrow_map = vec![0usize; band.n_arrows()];
    for y in 0..n {
        for h in 0..group_order {
            for x in 0..n {
                arrow_map[idx(y, h, x)] = idx(sigma[y], h, sigma[x]);
            }
        }
    }
    Ok(GroupoidMorphism {
        dom: band.clone(),
        cod: band.clone(),
        object_map: sigma.to_vec(),
        arrow_map,
    })
}

/// The wide subgroupoid of loops: same objects, only the arrows with equal
/// source and target. Returned with its inclusion.
pub fn loops_subgroupoid(
    g: &Arc<FiniteGroupoid>,
) -> Result<(Arc<FiniteGroupoid>, GroupoidMorphism), GroupoidError> {
    let loops: Vec<usize> = (0..g.n_arrows()).filter(|&a| g.src(a) == g.tgt(a)).collect();
    let index: BTreeMap<usize, usize> = loops.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let arrows = loops
        .iter()
        .map(|&a| Arrow {
            name: g.arrow(a).name.clone(),
            src: g.src(a),
            tgt: g.tgt(a),
        })
        .collect();
    let mut compose = Vec::new();
    for &a in &loops {
        for &b in &loops {
            if let Some(ab) = g.compose(a, b) {
                compose.push((index[&a], index[&b], index[&ab]));
            }
        }
    }
    let identity = (0..g.n_objects()).map(|x| index[&g.identity(x)]).collect();
    let inverse = loops.iter().map(|&a| index[&g.inverse(a)]).collect();
    let sub = Arc::new(FiniteGroupoid::new(
        g.object_names().to_vec(),
        arrows,
        compose,
        identity,
        inverse,
    )?);
    let inclusion = GroupoidMorphism {
        dom: sub.clone(),
        cod: g.clone(),
        object_map: (0..g.n_objects()).collect(),
        arrow_map: loops,
    };
    Ok((sub, inclusion))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(g: FiniteGroupoid) -> Arc<FiniteGroupoid> {
        Arc::new(g)
    }

    #[test]
    fn builders_produce_valid_groupoids() {
        let z2 = cyclic_group(2);
        let s3 = symmetric_group_3();
        let (z3, act) = translation_action(3);
        for g in [
            unit_groupoid(3),
            pair_groupoid(2),
            pair_groupoid(3),
            band_groupoid(2, &z2).unwrap(),
            band_groupoid(2, &s3).unwrap(),
            action_groupoid(&z3, &act).unwrap(),
            disjoint_union(&pair_groupoid(2), &z2),
        ] {
            let report = validate_groupoid(&g);
            assert!(report.ok(), "{:?} invalid: {:?}", g.object_names(), report.violations);
        }
    }

    #[test]
    fn corpus_arrow_counts() {
        let z2 = cyclic_group(2);
        let s3 = symmetric_group_3();
        let (z3, act) = translation_action(3);
        assert_eq!(unit_groupoid(3).n_arrows(), 3);
        assert_eq!(pair_groupoid(2).n_arrows(), 4);
        assert_eq!(pair_groupoid(3).n_arrows(), 9);
        assert_eq!(band_groupoid(2, &z2).unwrap().n_arrows(), 8); // n^2 |H| = 4*2
        assert_eq!(band_groupoid(2, &s3).unwrap().n_arrows(), 24); // 4*6
        assert_eq!(action_groupoid(&z3, &act).unwrap().n_arrows(), 9); // |G||X|
        assert_eq!(disjoint_union(&pair_groupoid(2), &z2).n_arrows(), 6);
    }

    #[test]
    fn composition_follows_g_after_f() {
        let p = pair_groupoid(3);
        // arrow (y,x) = y*3+x reads x -> y; (z,y) . (y,x) = (z,x)
        let g = 2 * 3 + 1; // 1 -> 2
        let f = 1 * 3 + 0; // 0 -> 1
        assert_eq!(p.src(g), 1);
        assert_eq!(p.tgt(f), 1);
        assert_eq!(p.compose(g, f), Some(2 * 3 + 0));
        assert_eq!(p.compose(f, g), None); // src(f)=0 != tgt(g)=2
    }

    #[test]
    fn band_groupoid_carries_group_structure() {
        let z2 = cyclic_group(2);
        let b = band_groupoid(2, &z2).unwrap();
        assert!(b.is_transitive());
        // isotropy at each object is Z/2
        for x in 0..2 {
            assert_eq!(b.loops_at(x).len(), 2);
        }
    }

    #[test]
    fn transitivity_detection() {
        assert!(pair_groupoid(2).is_transitive());
        assert!(!unit_groupoid(2).is_transitive());
        assert!(!disjoint_union(&pair_groupoid(2), &cyclic_group(2)).is_transitive());
        assert!(unit_groupoid(1).is_transitive());
    }

    #[test]
    fn components_partition_and_include() {
        let g = arc(disjoint_union(&pair_groupoid(2), &cyclic_group(2)));
        let comps = connected_components(&g);
        assert_eq!(comps.members, vec![vec![0, 1], vec![2]]);
        assert_eq!(comps.component_of, vec![0, 0, 1]);
        assert_eq!(comps.subgroupoids[0].n_arrows(), 4);
        assert_eq!(comps.subgroupoids[1].n_arrows(), 2);
        for inc in &comps.inclusions {
            assert!(validate_morphism(inc).is_empty());
        }
    }

    #[test]
    fn isotropy_groups() {
        let z2 = cyclic_group(2);
        let b = arc(band_groupoid(2, &z2).unwrap());
        let (iso, inc) = isotropy_group(&b, 0).unwrap();
        assert_eq!(iso.n_arrows(), 2);
        assert!(validate_groupoid(&iso).ok());
        assert!(validate_morphism(&inc).is_empty());

        let p = arc(pair_groupoid(3));
        let (iso, _) = isotropy_group(&p, 1).unwrap();
        assert_eq!(iso.n_arrows(), 1);
        assert!(isotropy_group(&p, 7).is_err());
    }

    #[test]
    fn induced_groupoid_with_projection() {
        // Duplicate the single object of Z/2 twice: the induced groupoid is
        // the band groupoid on 2 points over Z/2.
        let z2 = arc(cyclic_group(2));
        let (ind, proj) = induced_groupoid(&z2, &[0, 0]).unwrap();
        assert_eq!(ind.n_objects(), 2);
        assert_eq!(ind.n_arrows(), 8);
        assert!(validate_groupoid(&ind).ok());
        assert!(validate_morphism(&proj).is_empty());
        assert!(ind.is_transitive());
    }

    #[test]
    fn mutations_are_caught_with_correct_witnesses() {
        let z2 = cyclic_group(2);
        let g = band_groupoid(2, &z2).unwrap();
        let m = g.n_arrows();
        // Redirect one composite to each wrong arrow in turn; every mutation
        // must be rejected, and the report's witnesses must actually violate
        // an axiom in the mutated table.
        let mut tried = 0;
        for (gg, ff) in g.composable_pairs() {
            let correct = g.compose(gg, ff).unwrap();
            for wrong in 0..m {
                if wrong == correct {
                    continue;
                }
                let mut mutated = g.clone();
                mutated.compose[gg * m + ff] = Some(wrong as u32);
                let report = validate_groupoid(&mutated);
                assert!(!report.ok(), "mutation ({gg},{ff})->{wrong} slipped through");
                assert!(witnesses_hold(&mutated, &report));
                tried += 1;
            }
        }
        assert!(tried > 20);
    }

    /// Re-executes each reported witness against the tables.
    fn witnesses_hold(g: &FiniteGroupoid, report: &GroupoidReport) -> bool {
        report.violations.iter().all(|v| match *v {
            GroupoidViolation::IdentityEndpoints { object } => {
                let e = g.identity(object);
                g.src(e) != object || g.tgt(e) != object
            }
            GroupoidViolation::SpuriousComposite { g: a, f } => {
                g.compose(a, f).is_some() && g.src(a) != g.tgt(f)
            }
            GroupoidViolation::MissingComposite { g: a, f } => {
                g.compose(a, f).is_none() && g.src(a) == g.tgt(f)
            }
            GroupoidViolation::CompositeEndpoints { g: a, f } => match g.compose(a, f) {
                Some(af) => g.src(af) != g.src(f) || g.tgt(af) != g.tgt(a),
                None => false,
            },
            GroupoidViolation::RightUnit { g: a } => {
                g.compose(a, g.identity(g.src(a))) != Some(a)
            }
            GroupoidViolation::LeftUnit { g: a } => {
                g.compose(g.identity(g.tgt(a)), a) != Some(a)
            }
            GroupoidViolation::Associativity { g: a, f, e } => {
                let left = g.compose(a, f).and_then(|af| g.compose(af, e));
                let right = g.compose(f, e).and_then(|fe| g.compose(a, fe));
                left != right || left.is_none()
            }
            GroupoidViolation::InverseEndpoints { g: a } => {
                let i = g.inverse(a);
                g.src(i) != g.tgt(a) || g.tgt(i) != g.src(a)
            }
            GroupoidViolation::InverseLaw { g: a } => {
                let i = g.inverse(a);
                g.compose(i, a) != Some(g.identity(g.src(a)))
                    || g.compose(a, i) != Some(g.identity(g.tgt(a)))
            }
        })
    }

    #[test]
    fn morphism_enumeration_counts() {
        // Z/2 -> Z/2: the two group endomorphisms (trivial and identity).
        let z2 = arc(cyclic_group(2));
        let homs = enumerate_morphisms(&z2, &z2, 10).unwrap();
        assert_eq!(homs.len(), 2);

        // Z/3 -> Z/2: only the trivial one (orders are coprime).
        let z3 = arc(cyclic_group(3));
        let homs = enumerate_morphisms(&z3, &z2, 10).unwrap();
        assert_eq!(homs.len(), 1);

        // one object into pair_groupoid(2): pick either object.
        let u1 = arc(unit_groupoid(1));
        let p2 = arc(pair_groupoid(2));
        let homs = enumerate_morphisms(&u1, &p2, 10).unwrap();
        assert_eq!(homs.len(), 2);

        // Z/2 into band(2, Z/2): choose an object (2) and a group hom (2).
        let band = arc(band_groupoid(2, &cyclic_group(2)).unwrap());
        let homs = enumerate_morphisms(&z2, &band, 10).unwrap();
        assert_eq!(homs.len(), 4);

        // guard trips
        assert!(matches!(
            enumerate_morphisms(&arc(band_groupoid(2, &symmetric_group_3()).unwrap()), &z2, 10),
            Err(GroupoidError::GuardExceeded { .. })
        ));
    }

    #[test]
    fn group_table_validation_rejects_junk() {
        // A non-associative "table": swap one entry of Z/3.
        let mut table: Vec<Vec<usize>> = (0..3)
            .map(|a| (0..3).map(|b| (a + b) % 3).collect())
            .collect();
        table[1][1] = 1; // 1+1 = 1 breaks cancellation
        let labels = vec!["e".into(), "a".into(), "b".into()];
        assert!(group_from_table(labels, table, 0).is_err());
    }

    #[test]
    fn corpus_morphisms_validate() {
        let (unit, _pair, diag) = diagonal_embedding(2);
        assert!(validate_morphism(&diag).is_empty());
        assert!(!diag.is_bijective());
        assert_eq!(diag.arrow_map, vec![0, 3]);
        assert_eq!(unit.n_arrows(), 2);

        let (group, action) = translation_action(3);
        let group = arc(group);
        let (act, pr) = action_projection(&group, &action).unwrap();
        assert!(validate_morphism(&pr).is_empty());
        assert!(!pr.is_bijective());
        assert_eq!(act.n_arrows(), 9);
        // every arrow keeps its group label
        for h in 0..3 {
            for p in 0..3 {
                assert_eq!(pr.arrow_map[h * 3 + p], h);
            }
        }

        let band = arc(band_groupoid(2, &cyclic_group(2)).unwrap());
        let swap = band_automorphism(&band, 2, 2, &[1, 0]).unwrap();
        assert!(validate_morphism(&swap).is_empty());
        assert!(swap.is_bijective());
        let twice = swap.then(&swap);
        assert_eq!(twice.arrow_map, (0..band.n_arrows()).collect::<Vec<_>>());
        assert!(band_automorphism(&band, 2, 2, &[0, 0]).is_err());
        assert!(band_automorphism(&band, 2, 3, &[1, 0]).is_err());
    }

    #[test]
    fn loops_subgroupoid_keeps_objects_and_drops_crossings() {
        let p3 = arc(pair_groupoid(3));
        let (sub, inc) = loops_subgroupoid(&p3).unwrap();
        assert!(validate_morphism(&inc).is_empty());
        assert_eq!(sub.n_objects(), 3);
        assert_eq!(sub.n_arrows(), 3); // only the identities
        assert!(validate_groupoid(&sub).ok());

        let band = arc(band_groupoid(2, &cyclic_group(2)).unwrap());
        let (sub, inc) = loops_subgroupoid(&band).unwrap();
        assert!(validate_morphism(&inc).is_empty());
        assert_eq!(sub.n_arrows(), 4); // Z/2 at each of the two points
        assert!(validate_groupoid(&sub).ok());
        assert!(!sub.is_transitive());
    }
}
