//! Bounded complexes of Bott–Samelson objects, Rouquier complexes, the Hom
//! complex with its differential, Gaussian elimination, null-homotopy search
//! and windowed cohomology.
//!
//! A summand `B_w⟨q⟩` sits in cohomological degree `q` with polynomial shift `q`.
//! Summands produced by Gaussian elimination may carry an idempotent of `B_w`,
//! in which case they stand for its image.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::coxeter::{coxeter_projection, BraidLetter, BraidWord, CoxWord, CoxeterSystem, Decoration};
use crate::error::{Error, Result};
use crate::hecke::{bott_samelson_class, HeckeElt, LaurentInt};
use crate::leaves::{eval_matrix, HomBasis};
use crate::linalg::{Echelon, SparseRow};
use crate::ring::{Monomial, Polynomial, Scalar};
use crate::soergel::{bits_string, Calculus, LocalizedMorphism};

/// Coordinates over a dg double-leaves basis: label index to left R-coefficient.
pub type DgCoords = BTreeMap<usize, Polynomial>;

/// One summand `B_w⟨q⟩` of a complex, possibly cut down by an idempotent.
#[derive(Clone, Debug)]
pub struct Summand {
    /// Underlying Bott–Samelson word.
    pub word: CoxWord,
    /// Cohomological degree.
    pub cohdeg: i32,
    /// Polynomial shift (Tate twist exponent).
    pub shift: i32,
    /// Subexpression of the braid word selecting the letters of `word`.
    pub origin: Option<u32>,
    /// Idempotent of `B_word` whose image is the summand (`None` for all of `B_word`).
    pub idempotent: Option<LocalizedMorphism>,
    /// Class of the (unshifted) summand in the Hecke algebra.
    pub class: HeckeElt,
}

impl Summand {
    /// A full Bott–Samelson summand.
    pub fn bott_samelson(sys: &CoxeterSystem, word: CoxWord, cohdeg: i32, shift: i32, origin: Option<u32>) -> Self {
        let class = bott_samelson_class(sys, &word);
        Summand { word, cohdeg, shift, origin, idempotent: None, class }
    }

    /// The idempotent, or the identity of `B_word`.
    pub fn projector(&self, calc: &Calculus) -> LocalizedMorphism {
        self.idempotent.clone().unwrap_or_else(|| calc.identity(&self.word).without_tree())
    }
}

/// A bounded complex with finitely many summands.
#[derive(Clone, Debug)]
pub struct ComplexObj {
    braid: Option<BraidWord>,
    summands: Vec<Summand>,
    diff: BTreeMap<(usize, usize), LocalizedMorphism>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl ComplexObj {
    /// Builds a complex, checking degrees of the differential components.
    pub fn new(braid: Option<BraidWord>, summands: Vec<Summand>, diff: BTreeMap<(usize, usize), LocalizedMorphism>) -> Result<Self> {
        let n = summands.len();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        let mut kept = BTreeMap::new();
        for ((a, b), f) in diff {
            if a >= n || b >= n {
                return Err(Error::ComplexMismatch);
            }
            if f.is_zero() {
                continue;
            }
            let (sa, sb) = (&summands[a], &summands[b]);
            if sb.cohdeg != sa.cohdeg + 1 || f.src() != &sa.word || f.tgt() != &sb.word || f.degree() != sb.shift - sa.shift {
                return Err(Error::Verification(format!("differential component {a} -> {b} has the wrong shape")));
            }
            out_edges[a].push(b);
            in_edges[b].push(a);
            kept.insert((a, b), f.without_tree());
        }
        Ok(ComplexObj { braid, summands, diff: kept, out_edges, in_edges })
    }

    /// The braid word, for Rouquier complexes and their tensor products.
    pub fn braid(&self) -> Option<&BraidWord> {
        self.braid.as_ref()
    }

    /// Summands.
    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    /// Number of summands.
    pub fn len(&self) -> usize {
        self.summands.len()
    }

    /// Whether the complex has no summands.
    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Nonzero differential components `(source, target) ↦ morphism`.
    pub fn differential(&self) -> &BTreeMap<(usize, usize), LocalizedMorphism> {
        &self.diff
    }

    /// One differential component.
    pub fn component(&self, a: usize, b: usize) -> Option<&LocalizedMorphism> {
        self.diff.get(&(a, b))
    }

    /// Targets of the components leaving `a`.
    pub fn out_edges(&self, a: usize) -> &[usize] {
        &self.out_edges[a]
    }

    /// Sources of the components entering `b`.
    pub fn in_edges(&self, b: usize) -> &[usize] {
        &self.in_edges[b]
    }

    /// Whether every summand is a full Bott–Samelson object.
    pub fn is_bott_samelson(&self) -> bool {
        self.summands.iter().all(|s| s.idempotent.is_none())
    }

    /// Index of the summand with the given origin subexpression.
    pub fn index_of_origin(&self, origin: u32) -> Option<usize> {
        self.summands.iter().position(|s| s.origin == Some(origin))
    }

    /// Checks `d ∘ d = 0` exactly.
    pub fn d_squared_is_zero(&self, calc: &Calculus) -> Result<bool> {
        for a in 0..self.len() {
            let mut acc: BTreeMap<usize, LocalizedMorphism> = BTreeMap::new();
            for &b in &self.out_edges[a] {
                for &c in &self.out_edges[b] {
                    let g = calc.compose(&self.diff[&(b, c)], &self.diff[&(a, b)])?;
                    let slot = acc.remove(&c);
                    acc.insert(c, match slot {
                        Some(x) => x.add(&g)?,
                        None => g,
                    });
                }
            }
            if acc.values().any(|f| !f.is_zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Σ (−1)^{cohdeg} v^{shift} [summand]`.
    pub fn euler_char(&self) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for s in &self.summands {
            let sign = if s.cohdeg.rem_euclid(2) == 0 { 1 } else { -1 };
            out = out.add(&s.class.scale(&LaurentInt::monomial(s.shift, sign)));
        }
        out
    }

    /// Checks the recorded classes of cut-down summands at `v = 1` against the
    /// ranks of their idempotents on each standard block.
    pub fn check_classes_at_one(&self, calc: &Calculus) -> bool {
        let sys = calc.sys();
        let points = generic_points(calc, 1);
        for s in &self.summands {
            let Some(e) = &s.idempotent else { continue };
            let elems = sys.subexpression_elements(&s.word);
            let ev = eval_matrix(e, &points[0]);
            let mut blocks: BTreeMap<crate::coxeter::Element, Vec<u32>> = BTreeMap::new();
            for (mask, x) in elems.iter().enumerate() {
                blocks.entry(*x).or_default().push(mask as u32);
            }
            for (x, masks) in blocks {
                let col: HashMap<u32, usize> = masks.iter().enumerate().map(|(i, m)| (*m, i)).collect();
                let mut ech = Echelon::new(masks.len());
                for &f in &masks {
                    let row: SparseRow = ev.iter().filter(|((r, c), _)| *r == f && col.contains_key(c)).map(|((_, c), v)| (col[c], v.clone())).collect();
                    ech.push(row);
                }
                let want: i64 = s.class.coeff(x).coeffs().values().map(|c| i64::try_from(c.clone()).unwrap_or(i64::MAX)).sum();
                if ech.rank() as i64 != want {
                    return false;
                }
            }
        }
        true
    }

    /// Human-readable summand table and differential.
    pub fn render(&self, sys: &CoxeterSystem) -> Vec<String> {
        let mut lines = Vec::new();
        for (k, s) in self.summands.iter().enumerate() {
            let w = sys.render_word(&s.word);
            let name = if w.is_empty() { "1".to_string() } else { format!("B_{w}") };
            let origin = s.origin.map(|o| bits_string(o, self.braid.as_ref().map_or(0, |b| b.len()))).unwrap_or_default();
            let cut = if s.idempotent.is_some() { " (image of idempotent)" } else { "" };
            lines.push(format!("[{k}] {origin} {name}({}) in degree {}{cut}", s.shift, s.cohdeg));
        }
        for ((a, b), f) in &self.diff {
            for (r, c, v) in f.render(sys) {
                lines.push(format!("d[{a}->{b}] ({r},{c}) = {v}"));
            }
        }
        lines
    }
}

/// The Rouquier complex of a braid word: summands `B_i⟨q_i⟩` over subexpressions `i`,
/// with dots on single changed letters signed by the zeros preceding them.
pub fn rouquier(calc: &Calculus, word: &[BraidLetter]) -> Result<ComplexObj> {
    let n = word.len();
    let sys = calc.sys();
    let mut summands = Vec::with_capacity(1 << n);
    for mask in 0u32..(1u32 << n) {
        let letters: CoxWord = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| word[k].gen).collect();
        let q: i32 = (0..n).filter(|k| mask >> k & 1 == 0).map(|k| if word[k].positive { 1 } else { -1 }).sum();
        summands.push(Summand::bott_samelson(sys, letters, q, q, Some(mask)));
    }
    let mut diff = BTreeMap::new();
    for mask in 0u32..(1u32 << n) {
        for k in 0..n {
            let bit = mask >> k & 1 == 1;
            let letter = word[k];
            let (target, dot) = match (letter.positive, bit) {
                (true, true) => (mask & !(1 << k), calc.counit(letter.gen)),
                (false, false) => (mask | (1 << k), calc.unit(letter.gen)),
                _ => continue,
            };
            let zeros = (0..k).filter(|j| mask >> j & 1 == 0).count();
            let before: CoxWord = (0..k).filter(|j| mask >> j & 1 == 1).map(|j| word[j].gen).collect();
            let after: CoxWord = (k + 1..n).filter(|j| mask >> j & 1 == 1).map(|j| word[j].gen).collect();
            let mut f = calc.tensor_all(&[calc.identity(&before), dot, calc.identity(&after)]);
            if zeros % 2 == 1 {
                f = f.neg();
            }
            diff.insert((mask as usize, target as usize), f);
        }
    }
    ComplexObj::new(Some(word.to_vec()), summands, diff)
}

/// Tensor product with differential `d ⊗ id + (−1)^p id ⊗ d`.
/// Summand `(a, b)` gets index `a + b·|A|`.
pub fn tensor_complex(calc: &Calculus, a: &ComplexObj, b: &ComplexObj) -> Result<ComplexObj> {
    let sys = calc.sys();
    let na = a.len();
    let mut summands = Vec::with_capacity(na * b.len());
    for sb in &b.summands {
        for sa in &a.summands {
            let mut word = sa.word.clone();
            word.extend_from_slice(&sb.word);
            let origin = match (sa.origin, sb.origin, a.braid.as_ref()) {
                (Some(x), Some(y), Some(br)) => Some(x | (y << br.len())),
                _ => None,
            };
            let idempotent = if sa.idempotent.is_none() && sb.idempotent.is_none() {
                None
            } else {
                Some(calc.tensor(&sa.projector(calc), &sb.projector(calc)).without_tree())
            };
            let class = sa.class.mul(sys, &sb.class);
            summands.push(Summand { word, cohdeg: sa.cohdeg + sb.cohdeg, shift: sa.shift + sb.shift, origin, idempotent, class });
        }
    }
    let mut diff = BTreeMap::new();
    for (j, sb) in b.summands.iter().enumerate() {
        let idb = sb.projector(calc);
        for ((x, y), f) in &a.diff {
            diff.insert((x + j * na, y + j * na), calc.tensor(f, &idb).without_tree());
        }
    }
    for (i, sa) in a.summands.iter().enumerate() {
        let ida = sa.projector(calc);
        for ((x, y), f) in &b.diff {
            let mut g = calc.tensor(&ida, f).without_tree();
            if sa.cohdeg.rem_euclid(2) == 1 {
                g = g.neg();
            }
            diff.insert((i + x * na, i + y * na), g);
        }
    }
    let braid = match (&a.braid, &b.braid) {
        (Some(x), Some(y)) => Some(x.iter().chain(y).copied().collect()),
        _ => None,
    };
    ComplexObj::new(braid, summands, diff)
}

/// A homogeneous element of `Hom•(A, B)` of cohomological degree `p`, given by
/// components `A^q ⊇ summand a → summand b ⊆ B^{q+p}`.
#[derive(Clone, Debug)]
pub struct DgHomElement {
    source: Arc<ComplexObj>,
    target: Arc<ComplexObj>,
    cohdeg: i32,
    components: BTreeMap<(usize, usize), LocalizedMorphism>,
}

impl DgHomElement {
    /// Builds an element, checking degrees and shapes of the components.
    pub fn new(source: Arc<ComplexObj>, target: Arc<ComplexObj>, cohdeg: i32, components: BTreeMap<(usize, usize), LocalizedMorphism>) -> Result<Self> {
        let mut kept = BTreeMap::new();
        for ((a, b), f) in components {
            if a >= source.len() || b >= target.len() {
                return Err(Error::ComplexMismatch);
            }
            if f.is_zero() {
                continue;
            }
            let (sa, sb) = (&source.summands[a], &target.summands[b]);
            if sb.cohdeg - sa.cohdeg != cohdeg || f.src() != &sa.word || f.tgt() != &sb.word {
                return Err(Error::Verification(format!("component {a} -> {b} does not fit cohomological degree {cohdeg}")));
            }
            kept.insert((a, b), f.without_tree());
        }
        Ok(DgHomElement { source, target, cohdeg, components: kept })
    }

    /// The zero element.
    pub fn zero(source: Arc<ComplexObj>, target: Arc<ComplexObj>, cohdeg: i32) -> Self {
        DgHomElement { source, target, cohdeg, components: BTreeMap::new() }
    }

    /// The identity of a complex: the sum of the summand identities.
    pub fn identity(calc: &Calculus, c: Arc<ComplexObj>) -> Self {
        let components = c.summands.iter().enumerate().map(|(k, s)| ((k, k), s.projector(calc))).collect();
        DgHomElement { source: c.clone(), target: c, cohdeg: 0, components }
    }

    /// The differential of a complex as an element of degree 1 of its endomorphisms.
    pub fn differential_of(c: Arc<ComplexObj>) -> Self {
        let components = c.diff.clone();
        DgHomElement { source: c.clone(), target: c, cohdeg: 1, components }
    }

    /// Source complex.
    pub fn source(&self) -> &Arc<ComplexObj> {
        &self.source
    }

    /// Target complex.
    pub fn target(&self) -> &Arc<ComplexObj> {
        &self.target
    }

    /// Cohomological degree.
    pub fn cohdeg(&self) -> i32 {
        self.cohdeg
    }

    /// Nonzero components.
    pub fn components(&self) -> &BTreeMap<(usize, usize), LocalizedMorphism> {
        &self.components
    }

    /// Whether all components vanish.
    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Polynomial degree of each component: Soergel degree minus the shift difference.
    pub fn poly_degrees(&self) -> BTreeSet<i32> {
        self.components.iter().map(|((a, b), f)| f.degree() - (self.target.summands[*b].shift - self.source.summands[*a].shift)).collect()
    }

    fn same_shape(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.source, &other.source) && Arc::ptr_eq(&self.target, &other.target) && self.cohdeg == other.cohdeg
    }

    fn accumulate(acc: &mut BTreeMap<(usize, usize), LocalizedMorphism>, key: (usize, usize), f: LocalizedMorphism) -> Result<()> {
        if f.is_zero() {
            return Ok(());
        }
        let next = match acc.remove(&key) {
            Some(x) => x.add(&f)?,
            None => f,
        };
        if !next.is_zero() {
            acc.insert(key, next.without_tree());
        }
        Ok(())
    }

    /// Sum of two elements with the same complexes and degree.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.same_shape(other) {
            return Err(Error::ComplexMismatch);
        }
        let mut acc = self.components.clone();
        for (k, f) in &other.components {
            Self::accumulate(&mut acc, *k, f.clone())?;
        }
        Ok(DgHomElement { source: self.source.clone(), target: self.target.clone(), cohdeg: self.cohdeg, components: acc })
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Scalar) -> Self {
        let components = if c.is_zero() { BTreeMap::new() } else { self.components.iter().map(|(k, f)| (*k, f.scale(c).without_tree())).collect() };
        DgHomElement { source: self.source.clone(), target: self.target.clone(), cohdeg: self.cohdeg, components }
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        self.scale(&(-Scalar::one()))
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Exact equality of all components.
    pub fn equals(&self, other: &Self) -> bool {
        self.same_shape(other) && self.components == other.components
    }

    /// Composition `g ∘ f`.
    pub fn compose(calc: &Calculus, g: &Self, f: &Self) -> Result<Self> {
        if !Arc::ptr_eq(&f.target, &g.source) {
            return Err(Error::ComplexMismatch);
        }
        let mut by_mid: HashMap<usize, Vec<(usize, &LocalizedMorphism)>> = HashMap::new();
        for ((b, c), gv) in &g.components {
            by_mid.entry(*b).or_default().push((*c, gv));
        }
        let mut acc = BTreeMap::new();
        for ((a, b), fv) in &f.components {
            if let Some(list) = by_mid.get(b) {
                for (c, gv) in list {
                    Self::accumulate(&mut acc, (*a, *c), calc.compose(gv, fv)?.without_tree())?;
                }
            }
        }
        Ok(DgHomElement { source: f.source.clone(), target: g.target.clone(), cohdeg: f.cohdeg + g.cohdeg, components: acc })
    }

    /// Tensor product with the Koszul sign `(−1)^{|g|·cohdeg(a)}` on the component from `(a, c)`.
    pub fn tensor(calc: &Calculus, f: &Self, g: &Self, source: Arc<ComplexObj>, target: Arc<ComplexObj>) -> Result<Self> {
        let (na, nb) = (f.source.len(), f.target.len());
        if source.len() != na * g.source.len() || target.len() != nb * g.target.len() {
            return Err(Error::ComplexMismatch);
        }
        let mut acc = BTreeMap::new();
        for ((a, b), fv) in &f.components {
            let sign = g.cohdeg.rem_euclid(2) == 1 && f.source.summands[*a].cohdeg.rem_euclid(2) == 1;
            for ((c, d), gv) in &g.components {
                let mut t = calc.tensor(fv, gv).without_tree();
                if sign {
                    t = t.neg();
                }
                Self::accumulate(&mut acc, (a + c * na, b + d * nb), t)?;
            }
        }
        DgHomElement::new(source, target, f.cohdeg + g.cohdeg, acc)
    }

    /// The Hom-complex differential `d_B ∘ f − (−1)^p f ∘ d_A`.
    pub fn differential(&self, calc: &Calculus) -> Result<Self> {
        let mut acc = BTreeMap::new();
        let minus = self.cohdeg.rem_euclid(2) == 0;
        for ((a, b), f) in &self.components {
            for &b2 in self.target.out_edges(*b) {
                let g = calc.compose(&self.target.diff[&(*b, b2)], f)?;
                Self::accumulate(&mut acc, (*a, b2), g)?;
            }
            for &a0 in self.source.in_edges(*a) {
                let g = calc.compose(f, &self.source.diff[&(a0, *a)])?;
                Self::accumulate(&mut acc, (a0, *b), if minus { g.neg() } else { g })?;
            }
        }
        Ok(DgHomElement { source: self.source.clone(), target: self.target.clone(), cohdeg: self.cohdeg + 1, components: acc })
    }

    /// Whether the element is a chain map (closed).
    pub fn is_closed(&self, calc: &Calculus) -> Result<bool> {
        Ok(self.differential(calc)?.is_zero())
    }
}

/// One operation of the patch calculus on a component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatchTerm {
    /// `"top"` or `"bottom"`.
    pub boundary: String,
    /// `"dot-sprouting"` or `"strand-uprooting"`.
    pub operation: String,
    /// Letter position in the braid word.
    pub position: usize,
    /// Sign of the term.
    pub sign: i32,
    /// New source summand origin.
    pub source_origin: u32,
    /// New target summand origin.
    pub target_origin: u32,
}

/// The dot placed by one patch operation and the new subexpression.
fn patch_dot(calc: &Calculus, word: &[BraidLetter], mask: u32, k: usize, on_top: bool) -> Option<(u32, LocalizedMorphism, &'static str)> {
    let letter = word[k];
    let bit = mask >> k & 1 == 1;
    let before: CoxWord = (0..k).filter(|j| mask >> j & 1 == 1).map(|j| word[j].gen).collect();
    let after: CoxWord = (k + 1..word.len()).filter(|j| mask >> j & 1 == 1).map(|j| word[j].gen).collect();
    // Black boundary: positive letters at the bottom, negative letters on top.
    let black = letter.positive != on_top;
    let (new_mask, dot, op) = match (black, bit, on_top) {
        (true, false, true) => (mask | (1 << k), calc.unit(letter.gen), "dot-sprouting"),
        (true, false, false) => (mask | (1 << k), calc.counit(letter.gen), "dot-sprouting"),
        (false, true, true) => (mask & !(1 << k), calc.counit(letter.gen), "strand-uprooting"),
        (false, true, false) => (mask & !(1 << k), calc.unit(letter.gen), "strand-uprooting"),
        _ => return None,
    };
    Some((new_mask, calc.tensor_all(&[calc.identity(&before), dot, calc.identity(&after)]).without_tree(), op))
}

/// The Hom differential computed by the patch rules: every allowed operation on
/// the top boundary with sign `(−1)^k`, and on the bottom boundary with the extra
/// sign `(−1)^{p+1}`, where `k` counts the patches to the left.
/// Both complexes must be Rouquier complexes (or tensor products of them).
pub fn patch_differential(calc: &Calculus, phi: &DgHomElement) -> Result<(DgHomElement, Vec<PatchTerm>)> {
    let (src, tgt) = (&phi.source, &phi.target);
    let (Some(wa), Some(wb)) = (src.braid(), tgt.braid()) else { return Err(Error::ComplexMismatch) };
    if !src.is_bott_samelson() || !tgt.is_bott_samelson() {
        return Err(Error::ComplexMismatch);
    }
    let mut acc = BTreeMap::new();
    let mut terms = Vec::new();
    for ((a, b), f) in &phi.components {
        let (Some(ia), Some(ib)) = (src.summands[*a].origin, tgt.summands[*b].origin) else { return Err(Error::ComplexMismatch) };
        for k in 0..wb.len() {
            let Some((nb, dot, op)) = patch_dot(calc, wb, ib, k, true) else { continue };
            let patches = (0..k).filter(|j| ib >> j & 1 == 0).count();
            let sign = if patches % 2 == 0 { 1 } else { -1 };
            let g = calc.compose(&dot, f)?;
            let g = if sign < 0 { g.neg() } else { g };
            let b2 = tgt.index_of_origin(nb).ok_or(Error::ComplexMismatch)?;
            terms.push(PatchTerm { boundary: "top".into(), operation: op.into(), position: k, sign, source_origin: ia, target_origin: nb });
            DgHomElement::accumulate(&mut acc, (*a, b2), g)?;
        }
        for k in 0..wa.len() {
            let Some((na, dot, op)) = patch_dot(calc, wa, ia, k, false) else { continue };
            let patches = (0..k).filter(|j| ia >> j & 1 == 0).count();
            let exponent = patches as i32 + phi.cohdeg + 1;
            let sign = if exponent.rem_euclid(2) == 0 { 1 } else { -1 };
            let g = calc.compose(f, &dot)?;
            let g = if sign < 0 { g.neg() } else { g };
            let a0 = src.index_of_origin(na).ok_or(Error::ComplexMismatch)?;
            terms.push(PatchTerm { boundary: "bottom".into(), operation: op.into(), position: k, sign, source_origin: na, target_origin: ib });
            DgHomElement::accumulate(&mut acc, (a0, *b), g)?;
        }
    }
    let out = DgHomElement { source: src.clone(), target: tgt.clone(), cohdeg: phi.cohdeg + 1, components: acc };
    Ok((out, terms))
}

/// Deterministic evaluation points avoiding every root.
pub(crate) fn generic_points(calc: &Calculus, count: usize) -> Vec<Vec<Scalar>> {
    let sys = calc.sys();
    let roots: Vec<Polynomial> = sys.elements().flat_map(|x| sys.root_images(x).to_vec()).collect();
    let rank = sys.rank();
    let mut out = Vec::new();
    let mut k: i64 = 1;
    while out.len() < count {
        let p: Vec<Scalar> = (0..rank).map(|i| Scalar::from_integer((k * (2 * i as i64 + 3) + (i as i64 + 1) * (i as i64 + 1) * 7 + k * k * (i as i64)).into())).collect();
        if roots.iter().all(|r| !r.eval(&p).is_zero()) {
            out.push(p);
        }
        k += 1;
    }
    out
}

/// Trace of a matrix evaluated at a point (the rank of an idempotent).
fn trace_at(f: &LocalizedMorphism, p: &[Scalar]) -> Scalar {
    f.entries().iter().filter(|((r, c), _)| r == c).map(|(_, v)| v.eval(p).expect("points avoid roots")).fold(Scalar::zero(), |a, b| a + b)
}

/// Rank of a matrix evaluated at a point.
fn rank_at(f: &LocalizedMorphism, p: &[Scalar]) -> usize {
    let ev = eval_matrix(f, p);
    let mut rows: BTreeMap<u32, SparseRow> = BTreeMap::new();
    for ((r, c), v) in ev {
        rows.entry(r).or_default().insert(c as usize, v);
    }
    let mut ech = Echelon::new(1usize << f.src().len());
    for (_, row) in rows {
        ech.push(row);
    }
    ech.rank()
}

/// How a pivot component splits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PivotKind {
    /// Both a split monomorphism and a split epimorphism.
    Isomorphism,
    /// Split monomorphism: the target keeps a complement.
    SplitMono,
    /// Split epimorphism: the source keeps a complement.
    SplitEpi,
}

/// One cancellation performed by Gaussian elimination.
#[derive(Clone, Debug, Serialize)]
pub struct EliminationStep {
    /// Cohomological degree of the pivot source.
    pub cohdeg: i32,
    /// Source word of the pivot.
    pub source_word: String,
    /// Target word of the pivot.
    pub target_word: String,
    /// Kind of cancellation.
    pub kind: PivotKind,
}

/// Result of Gaussian elimination with verified homotopy-equivalence data.
#[derive(Clone, Debug)]
pub struct Elimination {
    /// The reduced complex.
    pub reduced: Arc<ComplexObj>,
    /// Chain map `C → C_reduced`.
    pub pi: DgHomElement,
    /// Chain map `C_reduced → C`.
    pub iota: DgHomElement,
    /// Homotopy with `id − ι∘π = d(h)`.
    pub h: DgHomElement,
    /// Cancellations in order.
    pub steps: Vec<EliminationStep>,
    /// Whether `π∘ι = id`, `d(π) = d(ι) = 0` and `id − ι∘π = d(h)` all hold exactly.
    pub verified: bool,
}

struct Pivot {
    x: usize,
    y: usize,
    psi: LocalizedMorphism,
    kind: PivotKind,
}

fn find_pivot(calc: &Calculus, c: &ComplexObj, point: &[Scalar]) -> Result<Option<Pivot>> {
    let mut edges: Vec<(i32, usize, usize)> = c.diff.keys().map(|(a, b)| (c.summands[*a].cohdeg, *a, *b)).collect();
    edges.sort();
    for (_, x, y) in edges {
        let phi = &c.diff[&(x, y)];
        let (sx, sy) = (&c.summands[x], &c.summands[y]);
        let rx = match &sx.idempotent {
            Some(e) => trace_at(e, point),
            None => Scalar::from_integer((1i64 << sx.word.len()).into()),
        };
        let ry = match &sy.idempotent {
            Some(e) => trace_at(e, point),
            None => Scalar::from_integer((1i64 << sy.word.len()).into()),
        };
        let r = Scalar::from_integer((rank_at(phi, point) as i64).into());
        let mono_possible = r == rx;
        let epi_possible = r == ry;
        if !mono_possible && !epi_possible {
            continue;
        }
        let basis = calc.hom_basis(&sy.word, &sx.word)?;
        let degree = -phi.degree();
        if mono_possible {
            let ex = sx.projector(calc);
            if let Some(psi) = calc.solve_sandwich(&basis, degree, None, Some(phi), &ex)? {
                let psi = project(calc, &psi, sx, sy)?;
                let kind = if epi_possible && calc.compose(phi, &psi)?.same_matrix(&sy.projector(calc)) { PivotKind::Isomorphism } else { PivotKind::SplitMono };
                return Ok(Some(Pivot { x, y, psi, kind }));
            }
        }
        if epi_possible {
            let ey = sy.projector(calc);
            if let Some(psi) = calc.solve_sandwich(&basis, degree, Some(phi), None, &ey)? {
                let psi = project(calc, &psi, sx, sy)?;
                return Ok(Some(Pivot { x, y, psi, kind: PivotKind::SplitEpi }));
            }
        }
    }
    Ok(None)
}

/// `e_X ∘ ψ ∘ e_Y`.
fn project(calc: &Calculus, psi: &LocalizedMorphism, sx: &Summand, sy: &Summand) -> Result<LocalizedMorphism> {
    let mut out = psi.clone().without_tree();
    if let Some(e) = &sy.idempotent {
        out = calc.compose(&out, e)?;
    }
    if let Some(e) = &sx.idempotent {
        out = calc.compose(e, &out)?;
    }
    Ok(out.without_tree())
}

/// One elimination step: returns the new complex and the maps `π_k`, `ι_k`, `h_k`.
fn eliminate_once(calc: &Calculus, c: &Arc<ComplexObj>, pv: &Pivot) -> Result<(Arc<ComplexObj>, DgHomElement, DgHomElement, DgHomElement)> {
    let (x, y) = (pv.x, pv.y);
    let phi = &c.diff[&(x, y)];
    let k = c.summands[x].cohdeg;
    // The surviving complement, if any, and its idempotent.
    let survivor: Option<(usize, LocalizedMorphism)> = match pv.kind {
        PivotKind::Isomorphism => None,
        PivotKind::SplitMono => {
            let e = c.summands[y].projector(calc).sub(&calc.compose(phi, &pv.psi)?)?.without_tree();
            Some((y, e))
        }
        PivotKind::SplitEpi => {
            let e = c.summands[x].projector(calc).sub(&calc.compose(&pv.psi, phi)?)?.without_tree();
            Some((x, e))
        }
    };
    let survivor = survivor.filter(|(_, e)| !e.is_zero());
    let mut keep: Vec<usize> = Vec::new();
    let mut new_summands = Vec::new();
    for (i, s) in c.summands.iter().enumerate() {
        if i == x || i == y {
            if let Some((j, e)) = &survivor {
                if *j == i {
                    let (other, sign_shift) = if i == y { (x, c.summands[x].shift - s.shift) } else { (y, c.summands[y].shift - s.shift) };
                    let removed = c.summands[other].class.scale(&LaurentInt::v_pow(sign_shift));
                    let mut ns = s.clone();
                    ns.idempotent = Some(e.clone());
                    ns.class = s.class.sub(&removed);
                    ns.origin = None;
                    keep.push(i);
                    new_summands.push(ns);
                }
            }
            continue;
        }
        keep.push(i);
        new_summands.push(s.clone());
    }
    let new_proj: Vec<Option<LocalizedMorphism>> = keep.iter().map(|o| survivor.as_ref().filter(|(j, _)| j == o).map(|(_, e)| e.clone())).collect();
    // New differential.
    let mut diff = BTreeMap::new();
    for (na, &a) in keep.iter().enumerate() {
        for (nb, &b) in keep.iter().enumerate() {
            if c.summands[b].cohdeg != c.summands[a].cohdeg + 1 {
                continue;
            }
            let mut f = c.diff.get(&(a, b)).cloned();
            if c.summands[a].cohdeg == k {
                if let (Some(dxb), Some(day)) = (c.diff.get(&(x, b)), c.diff.get(&(a, y))) {
                    let corr = calc.compose(dxb, &calc.compose(&pv.psi, day)?)?;
                    f = Some(match f {
                        Some(f) => f.sub(&corr)?,
                        None => corr.neg(),
                    });
                }
            }
            let Some(mut f) = f else { continue };
            if let Some(e) = &new_proj[nb] {
                f = calc.compose(e, &f)?;
            }
            if let Some(e) = &new_proj[na] {
                f = calc.compose(&f, e)?;
            }
            if !f.is_zero() {
                diff.insert((na, nb), f.without_tree());
            }
        }
    }
    let new = Arc::new(ComplexObj::new(None, new_summands, diff)?);
    // ι: new → old.
    let mut iota = BTreeMap::new();
    let mut pi = BTreeMap::new();
    for (na, &a) in keep.iter().enumerate() {
        let ea = new_proj[na].clone().unwrap_or_else(|| c.summands[a].projector(calc));
        iota.insert((na, a), ea.clone());
        pi.insert((a, na), ea.clone());
        if c.summands[a].cohdeg == k {
            if let Some(day) = c.diff.get(&(a, y)) {
                let mut t = calc.compose(&pv.psi, day)?;
                if new_proj[na].is_some() {
                    t = calc.compose(&t, &ea)?;
                }
                if !t.is_zero() {
                    iota.insert((na, x), t.neg().without_tree());
                }
            }
        }
        if c.summands[a].cohdeg == k + 1 {
            if let Some(dxa) = c.diff.get(&(x, a)) {
                let mut t = calc.compose(dxa, &pv.psi)?;
                if let Some(e) = &new_proj[na] {
                    t = calc.compose(e, &t)?;
                }
                if !t.is_zero() {
                    pi.insert((y, na), t.neg().without_tree());
                }
            }
        }
    }
    let mut hk = BTreeMap::new();
    hk.insert((y, x), pv.psi.clone());
    let iota = DgHomElement::new(new.clone(), c.clone(), 0, iota)?;
    let pi = DgHomElement::new(c.clone(), new.clone(), 0, pi)?;
    let h = DgHomElement::new(c.clone(), c.clone(), -1, hk)?;
    Ok((new, pi, iota, h))
}

/// Gaussian elimination: repeatedly cancels the first differential component (in
/// `(cohdeg, source, target)` order) that is a split monomorphism or a split
/// epimorphism, keeping the complement as the image of an idempotent. Returns
/// the reduced complex with homotopy-equivalence data checked exactly.
pub fn gaussian_eliminate(calc: &Calculus, c: Arc<ComplexObj>) -> Result<Elimination> {
    let point = generic_points(calc, 1).remove(0);
    let mut cur = c.clone();
    let mut pi = DgHomElement::identity(calc, c.clone());
    let mut iota = DgHomElement::identity(calc, c.clone());
    let mut h = DgHomElement::zero(c.clone(), c.clone(), -1);
    let mut steps = Vec::new();
    while let Some(pv) = find_pivot(calc, &cur, &point)? {
        let sys = calc.sys();
        steps.push(EliminationStep {
            cohdeg: cur.summands[pv.x].cohdeg,
            source_word: sys.render_word(&cur.summands[pv.x].word),
            target_word: sys.render_word(&cur.summands[pv.y].word),
            kind: pv.kind,
        });
        let (next, pk, ik, hk) = eliminate_once(calc, &cur, &pv)?;
        let lifted = DgHomElement::compose(calc, &iota, &DgHomElement::compose(calc, &hk, &pi)?)?;
        h = h.add(&lifted)?;
        pi = DgHomElement::compose(calc, &pk, &pi)?;
        iota = DgHomElement::compose(calc, &iota, &ik)?;
        cur = next;
    }
    let id_small = DgHomElement::identity(calc, cur.clone());
    let id_big = DgHomElement::identity(calc, c.clone());
    let pi_iota = DgHomElement::compose(calc, &pi, &iota)?;
    let homotopy_ok = id_big.sub(&DgHomElement::compose(calc, &iota, &pi)?)?.equals(&h.differential(calc)?);
    let verified = pi_iota.equals(&id_small) && pi.is_closed(calc)? && iota.is_closed(calc)? && homotopy_ok && cur.d_squared_is_zero(calc)?;
    Ok(Elimination { reduced: cur, pi, iota, h, steps, verified })
}

/// A basis element of a Hom complex between Bott–Samelson complexes: a double
/// leaf between two summands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DgLabel {
    /// Source summand index.
    pub src: usize,
    /// Target summand index.
    pub tgt: usize,
    /// Index of the leaf in the basis of `Hom(B_src, B_tgt)`.
    pub leaf: usize,
    /// Subexpression of the source summand's word.
    pub e: u32,
    /// Subexpression of the target summand's word.
    pub e2: u32,
    /// Cohomological degree.
    pub cohdeg: i32,
    /// Soergel degree of the double leaf.
    pub degree: i32,
    /// Polynomial degree (Soergel degree minus shift difference).
    pub poly_degree: i32,
}

/// One row of a windowed cohomology table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyEntry {
    /// Cohomological degree.
    pub cohdeg: i32,
    /// Polynomial degree.
    pub poly_degree: i32,
    /// Dimension of the chain space.
    pub chain_dim: usize,
    /// Dimension of cohomology.
    pub dim: usize,
}

/// `Hom•(A, B)` in double-leaves coordinates, with the differential computed lazily.
pub struct HomComplex {
    source: Arc<ComplexObj>,
    target: Arc<ComplexObj>,
    bases: BTreeMap<(usize, usize), Arc<HomBasis>>,
    labels: Vec<DgLabel>,
    index: HashMap<(usize, usize, usize), usize>,
    rows: Mutex<HashMap<usize, Arc<Vec<(usize, Polynomial)>>>>,
    rank: usize,
}

impl std::fmt::Debug for HomComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HomComplex").field("source", &self.source.len()).field("target", &self.target.len()).field("labels", &self.labels.len()).finish()
    }
}

impl HomComplex {
    /// Builds the labeled basis. Both complexes must have full Bott–Samelson summands.
    pub fn new(calc: &Calculus, source: Arc<ComplexObj>, target: Arc<ComplexObj>) -> Result<Self> {
        if !source.is_bott_samelson() || !target.is_bott_samelson() {
            return Err(Error::ComplexMismatch);
        }
        let mut bases = BTreeMap::new();
        let mut labels = Vec::new();
        let mut index = HashMap::new();
        for (a, sa) in source.summands.iter().enumerate() {
            for (b, sb) in target.summands.iter().enumerate() {
                let basis = calc.hom_basis(&sa.word, &sb.word)?;
                for (k, l) in basis.leaves.iter().enumerate() {
                    index.insert((a, b, k), labels.len());
                    labels.push(DgLabel {
                        src: a,
                        tgt: b,
                        leaf: k,
                        e: l.e1,
                        e2: l.e2,
                        cohdeg: sb.cohdeg - sa.cohdeg,
                        degree: l.degree,
                        poly_degree: l.degree - (sb.shift - sa.shift),
                    });
                }
                bases.insert((a, b), basis);
            }
        }
        Ok(HomComplex { source, target, bases, labels, index, rows: Mutex::new(HashMap::new()), rank: calc.sys().rank() })
    }

    /// Source complex.
    pub fn source(&self) -> &Arc<ComplexObj> {
        &self.source
    }

    /// Target complex.
    pub fn target(&self) -> &Arc<ComplexObj> {
        &self.target
    }

    /// All labels.
    pub fn labels(&self) -> &[DgLabel] {
        &self.labels
    }

    /// Number of labels.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Whether the Hom complex is zero.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Basis of one summand pair.
    pub fn basis(&self, a: usize, b: usize) -> &Arc<HomBasis> {
        &self.bases[&(a, b)]
    }

    /// The label with the given summands and leaf subexpressions.
    pub fn find(&self, a: usize, b: usize, e: u32, e2: u32) -> Option<usize> {
        let k = self.bases.get(&(a, b))?.index_of(e, e2)?;
        self.index.get(&(a, b, k)).copied()
    }

    /// The quadruple `(i, i′, e, e′)` with `e`, `e′` extended by zeros to the braid words.
    pub fn quadruple(&self, label: usize) -> Option<(u32, u32, u32, u32)> {
        let l = &self.labels[label];
        let i = self.source.summands[l.src].origin?;
        let i2 = self.target.summands[l.tgt].origin?;
        Some((i, i2, extend_mask(i, l.e), extend_mask(i2, l.e2)))
    }

    /// The label with a given quadruple.
    pub fn find_quadruple(&self, i: u32, i2: u32, e: u32, e2: u32) -> Option<usize> {
        let a = self.source.index_of_origin(i)?;
        let b = self.target.index_of_origin(i2)?;
        self.find(a, b, restrict_mask(i, e)?, restrict_mask(i2, e2)?)
    }

    /// The element of `Hom•` given by one label.
    pub fn label_element(&self, label: usize) -> DgHomElement {
        let l = &self.labels[label];
        let f = self.bases[&(l.src, l.tgt)].leaves[l.leaf].morphism.clone();
        let mut comps = BTreeMap::new();
        comps.insert((l.src, l.tgt), f.without_tree());
        DgHomElement { source: self.source.clone(), target: self.target.clone(), cohdeg: l.cohdeg, components: comps }
    }

    /// Coordinates of an element.
    pub fn coordinates(&self, calc: &Calculus, phi: &DgHomElement) -> Result<DgCoords> {
        if !Arc::ptr_eq(&phi.source, &self.source) || !Arc::ptr_eq(&phi.target, &self.target) {
            return Err(Error::ComplexMismatch);
        }
        let mut out = DgCoords::new();
        for ((a, b), f) in &phi.components {
            let basis = &self.bases[&(*a, *b)];
            let coeffs = calc.express_in_basis(f, basis)?;
            for (k, c) in coeffs.into_iter().enumerate() {
                if !c.is_zero() {
                    out.insert(self.index[&(*a, *b, k)], c);
                }
            }
        }
        Ok(out)
    }

    /// The element with the given coordinates (homogeneous in cohomological degree `p`).
    pub fn element(&self, calc: &Calculus, coords: &DgCoords, p: i32) -> Result<DgHomElement> {
        let mut by_pair: BTreeMap<(usize, usize), BTreeMap<i32, Vec<Polynomial>>> = BTreeMap::new();
        for (label, c) in coords {
            let l = &self.labels[*label];
            if l.cohdeg != p {
                return Err(Error::Verification(format!("label {label} has cohomological degree {}, expected {p}", l.cohdeg)));
            }
            let n = self.bases[&(l.src, l.tgt)].len();
            for (m, v) in c.terms() {
                let deg = l.degree + 2 * m.total() as i32;
                let slot = by_pair.entry((l.src, l.tgt)).or_default().entry(deg).or_insert_with(|| vec![Polynomial::zero(); n]);
                slot[l.leaf] = slot[l.leaf].add(&Polynomial::monomial(*m, v.clone()));
            }
        }
        let mut comps = BTreeMap::new();
        for ((a, b), per_degree) in by_pair {
            for (deg, coeffs) in per_degree {
                let f = calc.combine(&self.bases[&(a, b)], &coeffs, deg)?;
                DgHomElement::accumulate(&mut comps, (a, b), f)?;
            }
        }
        Ok(DgHomElement { source: self.source.clone(), target: self.target.clone(), cohdeg: p, components: comps })
    }

    /// `d(L)` for one label, in coordinates.
    pub fn d_label(&self, calc: &Calculus, label: usize) -> Result<Arc<Vec<(usize, Polynomial)>>> {
        if let Some(r) = self.rows.lock().unwrap().get(&label) {
            return Ok(r.clone());
        }
        let d = self.label_element(label).differential(calc)?;
        let coords = self.coordinates(calc, &d)?;
        let row = Arc::new(coords.into_iter().collect::<Vec<_>>());
        self.rows.lock().unwrap().insert(label, row.clone());
        Ok(row)
    }

    /// `d` applied to coordinates (the differential is left R-linear).
    pub fn d_coords(&self, calc: &Calculus, coords: &DgCoords) -> Result<DgCoords> {
        let mut out = DgCoords::new();
        for (label, c) in coords {
            for (l2, v) in self.d_label(calc, *label)?.iter() {
                let e = out.entry(*l2).or_insert_with(Polynomial::zero);
                *e = e.add(&c.mul(v));
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// Basis `(label, monomial)` of the rational vector space in bidegree `(p, k)`.
    pub fn space(&self, p: i32, k: i32) -> Vec<(usize, Monomial)> {
        let mut out = Vec::new();
        for (i, l) in self.labels.iter().enumerate() {
            let r = k - l.poly_degree;
            if l.cohdeg == p && r >= 0 && r % 2 == 0 {
                for m in Monomial::all_of_total(self.rank, (r / 2) as u32) {
                    out.push((i, m));
                }
            }
        }
        out
    }

    fn expand(&self, calc: &Calculus, label: usize, m: Monomial, col: &HashMap<(usize, Monomial), usize>) -> Result<SparseRow> {
        let mut row = SparseRow::new();
        for (l2, v) in self.d_label(calc, label)?.iter() {
            for (m2, c) in v.terms() {
                let key = (*l2, m.mul(*m2));
                let j = *col.get(&key).ok_or_else(|| Error::Verification("differential leaves the bidegree".into()))?;
                let e = row.entry(j).or_insert_with(Scalar::zero);
                *e += c;
            }
        }
        row.retain(|_, v| !v.is_zero());
        Ok(row)
    }

    /// Rank of `d : C^{p,k} → C^{p+1,k}` over the base field.
    pub fn d_rank(&self, calc: &Calculus, p: i32, k: i32) -> Result<usize> {
        let dom = self.space(p, k);
        let cod = self.space(p + 1, k);
        let col: HashMap<(usize, Monomial), usize> = cod.iter().enumerate().map(|(j, x)| (*x, j)).collect();
        let mut ech = Echelon::new(cod.len());
        for (label, m) in dom {
            let row = self.expand(calc, label, m, &col)?;
            ech.push(row);
        }
        Ok(ech.rank())
    }

    /// Exact cohomology dimensions in the given cohomological and polynomial ranges.
    pub fn cohomology_window(&self, calc: &Calculus, cohdegs: std::ops::RangeInclusive<i32>, poly: std::ops::RangeInclusive<i32>) -> Result<Vec<CohomologyEntry>> {
        let mut out = Vec::new();
        for k in poly {
            for p in cohdegs.clone() {
                let n = self.space(p, k).len();
                let dim = n - self.d_rank(calc, p, k)? - self.d_rank(calc, p - 1, k)?;
                out.push(CohomologyEntry { cohdeg: p, poly_degree: k, chain_dim: n, dim });
            }
        }
        Ok(out)
    }

    /// Solves `d(h) = φ` for closed `φ` of cohomological degree `p` and polynomial
    /// degree `k ≤ window`. Returns the coordinates of `h`, verified exactly.
    pub fn find_homotopy(&self, calc: &Calculus, phi: &DgCoords, p: i32, window: i32) -> Result<DgCoords> {
        if phi.is_empty() {
            return Ok(DgCoords::new());
        }
        let mut ks = BTreeSet::new();
        for (label, c) in phi {
            let l = &self.labels[*label];
            if l.cohdeg != p {
                return Err(Error::Verification("element is not homogeneous".into()));
            }
            for (m, _) in c.terms() {
                ks.insert(l.poly_degree + 2 * m.total() as i32);
            }
        }
        if !self.d_coords(calc, phi)?.is_empty() {
            return Err(Error::Verification("element is not closed".into()));
        }
        let mut h = DgCoords::new();
        for k in ks {
            if k > window {
                return Err(Error::WindowExceeded(k));
            }
            let dom = self.space(p - 1, k);
            let cod = self.space(p, k);
            let col: HashMap<(usize, Monomial), usize> = cod.iter().enumerate().map(|(j, x)| (*x, j)).collect();
            // Columns of the system are the images of the domain basis; transpose into rows.
            let mut rows: Vec<SparseRow> = vec![SparseRow::new(); cod.len()];
            for (j, (label, m)) in dom.iter().enumerate() {
                for (r, v) in self.expand(calc, *label, *m, &col)? {
                    rows[r].insert(j, v);
                }
            }
            for (label, c) in phi {
                for (m, v) in c.terms() {
                    if self.labels[*label].poly_degree + 2 * m.total() as i32 == k {
                        rows[col[&(*label, *m)]].insert(dom.len(), v.clone());
                    }
                }
            }
            let sol = crate::linalg::solve(dom.len(), rows).ok_or(Error::NotNullHomotopic)?;
            for (j, (label, m)) in dom.iter().enumerate() {
                if !sol.particular[j].is_zero() {
                    let e = h.entry(*label).or_insert_with(Polynomial::zero);
                    *e = e.add(&Polynomial::monomial(*m, sol.particular[j].clone()));
                }
            }
        }
        if &self.d_coords(calc, &h)? != phi {
            return Err(Error::Verification("homotopy does not reproduce the element".into()));
        }
        Ok(h)
    }
}

/// Spreads the bits of `e` (over the letters selected by `i`) to positions of the full word.
pub fn extend_mask(i: u32, e: u32) -> u32 {
    let mut out = 0;
    let mut j = 0;
    for k in 0..32 {
        if i >> k & 1 == 1 {
            if e >> j & 1 == 1 {
                out |= 1 << k;
            }
            j += 1;
        }
    }
    out
}

/// Inverse of [`extend_mask`]; `None` if `e` is not below `i`.
pub fn restrict_mask(i: u32, e: u32) -> Option<u32> {
    if e & !i != 0 {
        return None;
    }
    let mut out = 0;
    let mut j = 0;
    for k in 0..32 {
        if i >> k & 1 == 1 {
            if e >> k & 1 == 1 {
                out |= 1 << j;
            }
            j += 1;
        }
    }
    Some(out)
}

/// Decorations of an extended subexpression over the Coxeter projection of a braid word.
pub fn extended_decorations(sys: &CoxeterSystem, word: &[BraidLetter], e: u32) -> Vec<Decoration> {
    sys.decorate_mask(&coxeter_projection(word), e).decorations
}
