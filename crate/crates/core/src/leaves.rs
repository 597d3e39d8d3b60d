//! Light leaves, double leaves, and coordinates with respect to double-leaf bases.
//!
//! A light leaf for a subexpression `e` of `w` is a morphism `B_w → B_{x̄}` built
//! letter by letter along the Bruhat stroll of `e`; `x̄` is the chosen reduced
//! word for the end point. Double leaves `flip(L_{w2,e2}) ∘ L_{w1,e1}` form a
//! basis of `Hom(B_{w1}, B_{w2})` as a left R-module.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::coxeter::{BraidMove, CoxWord, Decoration};
use crate::error::{Error, Result};
use crate::hecke::{graded_rank_pairing, LaurentInt};
use crate::linalg::{Echelon, SparseRow};
use crate::ring::{Monomial, Polynomial, RationalFunction, Scalar};
use crate::soergel::{Calculus, LocalizedMorphism};

/// One step of a light-leaf plan.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct LeafStep {
    /// Letter of the word at this step.
    pub letter: usize,
    /// Decoration of the step.
    pub decoration: Decoration,
    /// Braid moves bringing the current word to one ending in `letter` (D steps only).
    pub psi: Vec<BraidMove>,
    /// Braid moves bringing the resulting word to the chosen reduced word.
    pub phi: Vec<BraidMove>,
}

/// The choices made while building a light leaf.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct LightLeafPlan {
    /// Source word.
    pub word: CoxWord,
    /// Subexpression mask.
    pub mask: u32,
    /// Chosen reduced words `x̄_0, …, x̄_ℓ` along the stroll.
    pub reduced: Vec<CoxWord>,
    /// Per-letter steps.
    pub steps: Vec<LeafStep>,
}

impl LightLeafPlan {
    /// A short stable string identifying the plan.
    pub fn fingerprint(&self) -> String {
        let mut s = String::new();
        for step in &self.steps {
            s.push_str(&format!("{:?}[", step.decoration));
            for mv in step.psi.iter().chain(std::iter::once(&BraidMove { pos: usize::MAX, first: 0, second: 0, m: 0 })).chain(&step.phi) {
                if mv.pos == usize::MAX {
                    s.push('|');
                } else {
                    s.push_str(&format!("{}:{}{},", mv.pos, mv.first, mv.second));
                }
            }
            s.push(']');
        }
        s
    }
}

/// One double leaf `flip(L_{w2,e2}) ∘ L_{w1,e1}`.
#[derive(Clone, Debug)]
pub struct DoubleLeaf {
    /// Subexpression of the source word.
    pub e1: u32,
    /// Subexpression of the target word.
    pub e2: u32,
    /// Degree, `defect(e1) + defect(e2)`.
    pub degree: i32,
    /// The morphism.
    pub morphism: LocalizedMorphism,
}

/// Cached data for solving in one polynomial degree.
#[derive(Debug)]
struct DegreeSolver {
    unknowns: Vec<(usize, Monomial)>,
    rows: Vec<(usize, (u32, u32))>,
    inverse: Vec<Vec<Scalar>>,
}

/// The double-leaves basis of `Hom(B_{w1}, B_{w2})`.
#[derive(Debug)]
pub struct HomBasis {
    /// Source word.
    pub w1: CoxWord,
    /// Target word.
    pub w2: CoxWord,
    /// Basis elements, ordered by `(e1, e2)`.
    pub leaves: Vec<DoubleLeaf>,
    index: HashMap<(u32, u32), usize>,
    pub(crate) points: Vec<Vec<Scalar>>,
    evaluated: Mutex<HashMap<usize, Arc<Vec<HashMap<(u32, u32), Scalar>>>>>,
    solvers: Mutex<HashMap<i32, Arc<DegreeSolver>>>,
}

impl HomBasis {
    /// Index of the leaf labeled `(e1, e2)`.
    pub fn index_of(&self, e1: u32, e2: u32) -> Option<usize> {
        self.index.get(&(e1, e2)).copied()
    }

    /// Number of basis elements.
    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    /// Whether the Hom space is zero.
    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    /// Graded count `Σ v^{deg L}`.
    pub fn graded_count(&self) -> LaurentInt {
        self.leaves.iter().fold(LaurentInt::zero(), |acc, l| acc.add(&LaurentInt::v_pow(l.degree)))
    }
}

/// Evaluation points: integer vectors at which no root of a desk-scale realization vanishes.
fn evaluation_points(calc: &Calculus, count: usize) -> Vec<Vec<Scalar>> {
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

impl Calculus {
    /// The deterministic plan: lexicographically minimal reduced words and
    /// shortest braid-move paths with lexicographic tie-breaking.
    pub fn default_plan(&self, w: &[usize], mask: u32) -> Result<LightLeafPlan> {
        let sys = self.sys();
        let dec = sys.decorate_mask(w, mask);
        let reduced: Vec<CoxWord> = dec.stroll.iter().map(|x| sys.lexmin_word(*x).clone()).collect();
        let mut steps = Vec::with_capacity(w.len());
        for (i, &s) in w.iter().enumerate() {
            let cur = &reduced[i];
            let d = dec.decorations[i];
            let (psi, before_phi) = match d {
                Decoration::U0 => (Vec::new(), cur.clone()),
                Decoration::U1 => {
                    let mut v = cur.clone();
                    v.push(s);
                    (Vec::new(), v)
                }
                Decoration::D0 | Decoration::D1 => {
                    let psi = sys.exchange_witness(cur, s)?;
                    let mut zs = sys.apply_path(cur, &psi)?;
                    if d == Decoration::D1 {
                        zs.pop();
                    }
                    (psi, zs)
                }
            };
            let phi = sys.matsumoto_path(&before_phi, &reduced[i + 1])?;
            steps.push(LeafStep { letter: s, decoration: d, psi, phi });
        }
        Ok(LightLeafPlan { word: w.to_vec(), mask, reduced, steps })
    }

    /// Composite of the 2m-valent vertices along a braid-move path starting at `word`.
    pub fn braid_path_morphism(&self, word: &[usize], path: &[BraidMove]) -> Result<LocalizedMorphism> {
        let mut out = self.identity(word);
        let mut cur = word.to_vec();
        for mv in path {
            let step = self.braid_move_morphism(&cur, mv)?;
            cur = mv.apply(&cur)?;
            out = self.compose(&step, &out)?;
        }
        Ok(out)
    }

    /// Builds the light leaf `B_w → B_{x̄_ℓ}` following `plan`.
    pub fn build_light_leaf(&self, w: &[usize], mask: u32, plan: &LightLeafPlan) -> Result<LocalizedMorphism> {
        if plan.word != w || plan.mask != mask || plan.steps.len() != w.len() {
            return Err(Error::PlanInvalid("plan does not match the word and subexpression".into()));
        }
        let mut lam = self.identity(&[]);
        let mut cur: CoxWord = Vec::new();
        for (i, step) in plan.steps.iter().enumerate() {
            let s = w[i];
            match step.decoration {
                Decoration::U0 => lam = self.tensor(&lam, &self.counit(s)),
                Decoration::U1 => {
                    lam = self.tensor(&lam, &self.identity(&[s]));
                    cur.push(s);
                }
                Decoration::D0 | Decoration::D1 => {
                    lam = self.tensor(&lam, &self.identity(&[s]));
                    let psi = self.braid_path_morphism(&cur, &step.psi)?;
                    let zs = self.sys().apply_path(&cur, &step.psi)?;
                    if zs.last() != Some(&s) {
                        return Err(Error::PlanInvalid(format!("step {i}: rewritten word does not end in the letter")));
                    }
                    lam = self.compose(&self.tensor(&psi, &self.identity(&[s])), &lam)?;
                    let z = &zs[..zs.len() - 1];
                    let close = if step.decoration == Decoration::D0 { self.merge(s) } else { self.cap(s) };
                    lam = self.compose(&self.tensor(&self.identity(z), &close), &lam)?;
                    cur = if step.decoration == Decoration::D0 { zs.clone() } else { z.to_vec() };
                }
            }
            let phi = self.braid_path_morphism(&cur, &step.phi)?;
            cur = self.sys().apply_path(&cur, &step.phi)?;
            lam = self.compose(&phi, &lam)?;
            if cur != plan.reduced[i + 1] {
                return Err(Error::PlanInvalid(format!("step {i}: word after the step is not the chosen reduced word")));
            }
        }
        Ok(lam)
    }

    /// The light leaf for `(w, mask)` built from the default plan (cached).
    pub fn light_leaf(&self, w: &[usize], mask: u32) -> Result<LocalizedMorphism> {
        let key = (w.to_vec(), mask);
        if let Some(l) = self.leaf_cache.lock().unwrap().get(&key) {
            return Ok(l.clone());
        }
        let plan = self.default_plan(w, mask)?;
        let leaf = self.build_light_leaf(w, mask, &plan)?;
        self.leaf_cache.lock().unwrap().insert(key, leaf.clone());
        Ok(leaf)
    }

    fn flipped_leaf(&self, w: &[usize], mask: u32) -> Result<LocalizedMorphism> {
        let key = (w.to_vec(), mask | 1 << 31);
        if let Some(l) = self.leaf_cache.lock().unwrap().get(&key) {
            return Ok(l.clone());
        }
        let leaf = self.flip(&self.light_leaf(w, mask)?)?;
        self.leaf_cache.lock().unwrap().insert(key, leaf.clone());
        Ok(leaf)
    }

    /// The double leaf `flip(L_{w2,e2}) ∘ L_{w1,e1}`.
    pub fn double_leaf(&self, w1: &[usize], e1: u32, w2: &[usize], e2: u32) -> Result<LocalizedMorphism> {
        let sys = self.sys();
        if sys.element_of_sub(w1, e1) != sys.element_of_sub(w2, e2) {
            return Err(Error::ElementMismatch);
        }
        self.compose(&self.flipped_leaf(w2, e2)?, &self.light_leaf(w1, e1)?)
    }

    /// The double-leaves basis of `Hom(B_{w1}, B_{w2})` (cached).
    pub fn hom_basis(&self, w1: &[usize], w2: &[usize]) -> Result<Arc<HomBasis>> {
        let key = (w1.to_vec(), w2.to_vec());
        if let Some(b) = self.basis_cache.lock().unwrap().get(&key) {
            return Ok(b.clone());
        }
        let sys = self.sys();
        let s1 = sys.subexpression_elements(w1);
        let s2 = sys.subexpression_elements(w2);
        let mut leaves = Vec::new();
        for e1 in 0..s1.len() as u32 {
            for e2 in 0..s2.len() as u32 {
                if s1[e1 as usize] != s2[e2 as usize] {
                    continue;
                }
                let degree = sys.decorate_mask(w1, e1).defect() + sys.decorate_mask(w2, e2).defect();
                let morphism = self.double_leaf(w1, e1, w2, e2)?;
                leaves.push(DoubleLeaf { e1, e2, degree, morphism });
            }
        }
        let index = leaves.iter().enumerate().map(|(k, l)| ((l.e1, l.e2), k)).collect();
        let basis = Arc::new(HomBasis {
            w1: w1.to_vec(),
            w2: w2.to_vec(),
            leaves,
            index,
            points: evaluation_points(self, 48),
            evaluated: Mutex::new(HashMap::new()),
            solvers: Mutex::new(HashMap::new()),
        });
        self.basis_cache.lock().unwrap().insert(key, basis.clone());
        Ok(basis)
    }

    /// Whether the graded count of the basis equals the graded rank pairing.
    pub fn basis_count_matches(&self, basis: &HomBasis) -> bool {
        basis.graded_count() == graded_rank_pairing(self.sys(), &basis.w1, &basis.w2)
    }

    /// Positions `(f, e)` allowed by the block condition.
    pub(crate) fn positions(&self, w1: &[usize], w2: &[usize]) -> Vec<(u32, u32)> {
        let s1 = self.sys().subexpression_elements(w1);
        let s2 = self.sys().subexpression_elements(w2);
        let mut out = Vec::new();
        for f in 0..s2.len() as u32 {
            for e in 0..s1.len() as u32 {
                if s1[e as usize] == s2[f as usize] {
                    out.push((f, e));
                }
            }
        }
        out
    }

    pub(crate) fn evaluated_leaves(&self, basis: &HomBasis, point: usize) -> Arc<Vec<HashMap<(u32, u32), Scalar>>> {
        if let Some(v) = basis.evaluated.lock().unwrap().get(&point) {
            return v.clone();
        }
        let p = &basis.points[point];
        let v: Vec<HashMap<(u32, u32), Scalar>> = basis
            .leaves
            .iter()
            .map(|l| l.morphism.entries().iter().map(|(k, v)| (*k, v.eval(p).expect("evaluation points avoid all roots"))).collect())
            .collect();
        let v = Arc::new(v);
        basis.evaluated.lock().unwrap().insert(point, v.clone());
        v
    }

    /// Unknowns `(leaf, monomial)` for polynomial degree `degree`.
    pub(crate) fn degree_unknowns(&self, basis: &HomBasis, degree: i32) -> Vec<(usize, Monomial)> {
        let rank = self.sys().rank();
        let mut out = Vec::new();
        for (k, l) in basis.leaves.iter().enumerate() {
            let d = degree - l.degree;
            if d >= 0 && d % 2 == 0 {
                for m in Monomial::all_of_total(rank, (d / 2) as u32) {
                    out.push((k, m));
                }
            }
        }
        out
    }

    /// Builds (or fetches) the solver for one degree: a set of point evaluations
    /// whose restriction of the coefficient map is invertible, and its inverse.
    fn degree_solver(&self, basis: &HomBasis, degree: i32) -> Result<Arc<DegreeSolver>> {
        if let Some(s) = basis.solvers.lock().unwrap().get(&degree) {
            return Ok(s.clone());
        }
        let unknowns = self.degree_unknowns(basis, degree);
        let n = unknowns.len();
        let positions = self.positions(&basis.w1, &basis.w2);
        let mut ech = Echelon::new(n);
        let mut rows: Vec<(usize, (u32, u32))> = Vec::new();
        let mut dense: Vec<Vec<Scalar>> = Vec::new();
        'outer: for pi in 0..basis.points.len() {
            if ech.rank() == n {
                break;
            }
            let ev = self.evaluated_leaves(basis, pi);
            let p = &basis.points[pi];
            let mono_vals: Vec<Scalar> = unknowns.iter().map(|(_, m)| Polynomial::monomial(*m, Scalar::one()).eval(p)).collect();
            for pos in &positions {
                let mut row = SparseRow::new();
                let mut full = vec![Scalar::zero(); n];
                for (j, (k, _)) in unknowns.iter().enumerate() {
                    if let Some(v) = ev[*k].get(pos) {
                        let x = v * &mono_vals[j];
                        if !x.is_zero() {
                            row.insert(j, x.clone());
                            full[j] = x;
                        }
                    }
                }
                if ech.push(row) {
                    rows.push((pi, *pos));
                    dense.push(full);
                    if ech.rank() == n {
                        break 'outer;
                    }
                }
            }
        }
        if ech.rank() < n {
            return Err(Error::Verification(format!("double leaves are dependent in degree {degree}")));
        }
        let inverse = invert_dense(dense).ok_or_else(|| Error::Verification("singular evaluation matrix".into()))?;
        let solver = Arc::new(DegreeSolver { unknowns, rows, inverse });
        basis.solvers.lock().unwrap().insert(degree, solver.clone());
        Ok(solver)
    }

    /// Checks that the double leaves are linearly independent over the fraction
    /// field by finding an evaluation point where their matrices have full rank.
    /// This implies left-R-independence in every polynomial degree.
    pub fn check_independence(&self, basis: &HomBasis) -> bool {
        let positions = self.positions(&basis.w1, &basis.w2);
        let col: HashMap<(u32, u32), usize> = positions.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        for pi in 0..4.min(basis.points.len()) {
            let ev = self.evaluated_leaves(basis, pi);
            let mut ech = Echelon::new(positions.len());
            for leaf in ev.iter() {
                let row: SparseRow = leaf.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (col[k], v.clone())).collect();
                ech.push(row);
            }
            if ech.rank() == basis.len() {
                return true;
            }
        }
        false
    }

    /// Degreewise check: for every polynomial degree up to `window`, the products
    /// `m·L` (monomial times leaf) of that degree are linearly independent over Q.
    pub fn check_independence_degreewise(&self, basis: &HomBasis, window: i32) -> Result<bool> {
        let min = basis.leaves.iter().map(|l| l.degree).min().unwrap_or(0);
        let positions = self.positions(&basis.w1, &basis.w2);
        for d in min..=window {
            let unknowns = self.degree_unknowns(basis, d);
            let n = unknowns.len();
            if n == 0 {
                continue;
            }
            let mut ech = Echelon::new(n);
            for pi in 0..basis.points.len() {
                let ev = self.evaluated_leaves(basis, pi);
                let p = &basis.points[pi];
                let mono_vals: Vec<Scalar> = unknowns.iter().map(|(_, m)| Polynomial::monomial(*m, Scalar::one()).eval(p)).collect();
                for pos in &positions {
                    let row: SparseRow = unknowns
                        .iter()
                        .enumerate()
                        .filter_map(|(j, (k, _))| ev[*k].get(pos).map(|v| (j, v * &mono_vals[j])))
                        .filter(|(_, v)| !v.is_zero())
                        .collect();
                    ech.push(row);
                }
                if ech.rank() == n {
                    break;
                }
            }
            if ech.rank() < n {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Left R-coefficients of `f` in the basis (one polynomial per leaf).
    pub fn express_in_basis(&self, f: &LocalizedMorphism, basis: &HomBasis) -> Result<Vec<Polynomial>> {
        if f.src() != &basis.w1 || f.tgt() != &basis.w2 {
            return Err(Error::WordMismatch);
        }
        if f.is_zero() {
            return Ok(vec![Polynomial::zero(); basis.len()]);
        }
        let solver = self.degree_solver(basis, f.degree())?;
        let mut b = Vec::with_capacity(solver.rows.len());
        for (pi, pos) in &solver.rows {
            let v = f.entries().get(pos).map(|v| v.eval(&basis.points[*pi]).expect("evaluation points avoid all roots")).unwrap_or_else(Scalar::zero);
            b.push(v);
        }
        let n = solver.unknowns.len();
        let mut coeffs: Vec<BTreeMap<Monomial, Scalar>> = vec![BTreeMap::new(); basis.len()];
        for i in 0..n {
            let mut c = Scalar::zero();
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() && !solver.inverse[i][j].is_zero() {
                    c += &solver.inverse[i][j] * bj;
                }
            }
            if !c.is_zero() {
                let (k, m) = solver.unknowns[i];
                coeffs[k].insert(m, c);
            }
        }
        let coeffs: Vec<Polynomial> = coeffs.into_iter().map(Polynomial::from_terms).collect();
        let back = self.combine(basis, &coeffs, f.degree())?;
        if !back.same_matrix(f) {
            return Err(Error::NotInSpan);
        }
        Ok(coeffs)
    }

    /// Finds `ψ` of degree `degree` in the span of `basis` with `left ∘ ψ ∘ right = rhs`,
    /// where a missing `left` or `right` stands for an identity. Returns `None` if
    /// no such `ψ` exists. Equations are collected from point evaluations and the
    /// candidate is verified exactly.
    pub fn solve_sandwich(
        &self,
        basis: &HomBasis,
        degree: i32,
        left: Option<&LocalizedMorphism>,
        right: Option<&LocalizedMorphism>,
        rhs: &LocalizedMorphism,
    ) -> Result<Option<LocalizedMorphism>> {
        let unknowns = self.degree_unknowns(basis, degree);
        let n = unknowns.len();
        let check = |coeffs: &[Polynomial]| -> Result<Option<LocalizedMorphism>> {
            let psi = self.combine(basis, coeffs, degree)?;
            let mut lhs = psi.clone();
            if let Some(r) = right {
                lhs = self.compose(&lhs, r)?;
            }
            if let Some(l) = left {
                lhs = self.compose(l, &lhs)?;
            }
            Ok(if lhs.same_matrix(rhs) || (lhs.is_zero() && rhs.is_zero()) { Some(psi) } else { None })
        };
        if n == 0 {
            return check(&vec![Polynomial::zero(); basis.len()]);
        }
        let mut ech = Echelon::new(n);
        for pi in 0..basis.points.len() {
            let p = &basis.points[pi];
            let ev = self.evaluated_leaves(basis, pi);
            let l = left.map(|m| eval_matrix(m, p));
            let r = right.map(|m| eval_matrix(m, p));
            let b = eval_matrix(rhs, p);
            let mut rows: BTreeMap<(u32, u32), SparseRow> = BTreeMap::new();
            for (j, (k, m)) in unknowns.iter().enumerate() {
                let mv = Polynomial::monomial(*m, Scalar::one()).eval(p);
                let mut prod: HashMap<(u32, u32), Scalar> = ev[*k].iter().map(|(key, v)| (*key, v * &mv)).collect();
                if let Some(r) = &r {
                    prod = mat_mul(&prod, r);
                }
                if let Some(l) = &l {
                    prod = mat_mul(l, &prod);
                }
                for (key, v) in prod {
                    if !v.is_zero() {
                        rows.entry(key).or_default().insert(j, v);
                    }
                }
            }
            for (key, v) in &b {
                if !v.is_zero() {
                    rows.entry(*key).or_default().insert(n, v.clone());
                }
            }
            let before = ech.rank();
            for (_, row) in rows {
                ech.push(row);
                if ech.is_inconsistent() {
                    return Ok(None);
                }
            }
            if pi >= 1 && ech.rank() == before {
                let x = ech.particular().expect("consistent");
                let mut coeffs: Vec<BTreeMap<Monomial, Scalar>> = vec![BTreeMap::new(); basis.len()];
                for (j, (k, m)) in unknowns.iter().enumerate() {
                    if !x[j].is_zero() {
                        coeffs[*k].insert(*m, x[j].clone());
                    }
                }
                let coeffs: Vec<Polynomial> = coeffs.into_iter().map(Polynomial::from_terms).collect();
                if let Some(psi) = check(&coeffs)? {
                    return Ok(Some(psi));
                }
            }
        }
        Ok(None)
    }

    /// `Σ_L p_L · L` for left coefficients `p_L`.
    pub fn combine(&self, basis: &HomBasis, coeffs: &[Polynomial], degree: i32) -> Result<LocalizedMorphism> {
        let mut acc: BTreeMap<(u32, u32), RationalFunction> = BTreeMap::new();
        for (l, p) in basis.leaves.iter().zip(coeffs) {
            if p.is_zero() {
                continue;
            }
            for (k, v) in l.morphism.entries() {
                let e = acc.entry(*k).or_default();
                *e = e.add(&v.mul_poly(p));
            }
        }
        Ok(LocalizedMorphism::from_entries(basis.w1.clone(), basis.w2.clone(), degree, acc))
    }
}

/// Inverse of a dense square matrix over Q by Gauss–Jordan elimination.
pub fn invert_dense(mut a: Vec<Vec<Scalar>>) -> Option<Vec<Vec<Scalar>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Scalar>> = (0..n).map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = Scalar::one() / &a[col][col];
        for j in 0..n {
            if !a[col][j].is_zero() {
                a[col][j] *= &p;
            }
            if !inv[col][j].is_zero() {
                inv[col][j] *= &p;
            }
        }
        let (prow, pinv) = (a[col].clone(), inv[col].clone());
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                if !prow[j].is_zero() {
                    let d = &f * &prow[j];
                    a[r][j] -= d;
                }
                if !pinv[j].is_zero() {
                    let d = &f * &pinv[j];
                    inv[r][j] -= d;
                }
            }
        }
    }
    Some(inv)
}

/// Evaluates every entry of a morphism at a point.
pub(crate) fn eval_matrix(f: &LocalizedMorphism, p: &[Scalar]) -> HashMap<(u32, u32), Scalar> {
    f.entries().iter().map(|(k, v)| (*k, v.eval(p).expect("evaluation points avoid all roots"))).collect()
}

/// Product of two sparse matrices keyed by `(row, column)`.
pub(crate) fn mat_mul(a: &HashMap<(u32, u32), Scalar>, b: &HashMap<(u32, u32), Scalar>) -> HashMap<(u32, u32), Scalar> {
    let mut by_row: HashMap<u32, Vec<(u32, &Scalar)>> = HashMap::new();
    for ((r, c), v) in b {
        by_row.entry(*r).or_default().push((*c, v));
    }
    let mut out: HashMap<(u32, u32), Scalar> = HashMap::new();
    for ((r, mid), av) in a {
        if let Some(row) = by_row.get(mid) {
            for (c, bv) in row {
                *out.entry((*r, *c)).or_insert_with(Scalar::zero) += av * *bv;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}
