//! Coxeter systems with an exact realization, words, Bruhat order, decorated
//! subexpressions, braid-move paths and braid words.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{int, Polynomial, Scalar};

/// A word in the generators, as generator indices.
pub type CoxWord = Vec<usize>;

/// Largest group order the artifact accepts.
pub const MAX_GROUP_ORDER: usize = 10_000;

/// An element of the finite Coxeter group, identified by its exact action matrix.
///
/// Elements are interned by the owning [`CoxeterSystem`]; two handles are equal
/// exactly when their action matrices are equal.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Element(pub u32);

impl Element {
    /// The identity element.
    pub const IDENTITY: Element = Element(0);
}

/// Realization data as stored in configuration files.
///
/// `cartan[s][t]` is the pairing `⟨α_t, α_s^∨⟩`, so that `s(α_t) = α_t − cartan[s][t]·α_s`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RealizationConfig {
    /// Generator names.
    pub generators: Vec<String>,
    /// Coxeter matrix with ones on the diagonal.
    pub coxeter_matrix: Vec<Vec<u32>>,
    /// Cartan pairings; integers or rational strings such as `"-1/2"`.
    pub cartan: Vec<Vec<serde_json::Value>>,
}

impl RealizationConfig {
    /// Parses a JSON realization.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Built-in presets: `A1xA1`, `A2`, `B2`, `A3`, `A1xA2`, `G2`.
    pub fn preset(name: &str) -> Option<Self> {
        let norm: String = name.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('×', "x");
        let (gens, m, c): (Vec<&str>, Vec<Vec<u32>>, Vec<Vec<i64>>) = match norm.as_str() {
            "A1xA1" => (vec!["s", "t"], vec![vec![1, 2], vec![2, 1]], vec![vec![2, 0], vec![0, 2]]),
            "A2" => (vec!["s", "t"], vec![vec![1, 3], vec![3, 1]], vec![vec![2, -1], vec![-1, 2]]),
            "B2" => (vec!["s", "t"], vec![vec![1, 4], vec![4, 1]], vec![vec![2, -1], vec![-2, 2]]),
            "G2" => (vec!["s", "t"], vec![vec![1, 6], vec![6, 1]], vec![vec![2, -1], vec![-3, 2]]),
            "A3" => (
                vec!["s", "t", "u"],
                vec![vec![1, 3, 2], vec![3, 1, 3], vec![2, 3, 1]],
                vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
            ),
            "A1xA2" => (
                vec!["s", "t", "u"],
                vec![vec![1, 3, 2], vec![3, 1, 2], vec![2, 2, 1]],
                vec![vec![2, -1, 0], vec![-1, 2, 0], vec![0, 0, 2]],
            ),
            _ => return None,
        };
        Some(RealizationConfig {
            generators: gens.into_iter().map(String::from).collect(),
            coxeter_matrix: m,
            cartan: c.into_iter().map(|row| row.into_iter().map(serde_json::Value::from).collect()).collect(),
        })
    }
}

fn parse_scalar(v: &serde_json::Value) -> Result<Scalar> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(int)
            .ok_or_else(|| Error::InvalidRealization(format!("cartan entry {n} must be an integer or a rational string"))),
        serde_json::Value::String(s) => {
            let parts: Vec<&str> = s.trim().split('/').collect();
            let parse = |p: &str| p.trim().parse::<i64>().map_err(|_| Error::InvalidRealization(format!("bad rational `{s}`")));
            match parts.as_slice() {
                [n] => Ok(int(parse(n)?)),
                [n, d] => {
                    let d = parse(d)?;
                    if d == 0 {
                        return Err(Error::InvalidRealization(format!("zero denominator in `{s}`")));
                    }
                    Ok(crate::ring::q(parse(n)?, d))
                }
                _ => Err(Error::InvalidRealization(format!("bad rational `{s}`"))),
            }
        }
        other => Err(Error::InvalidRealization(format!("bad cartan entry {other}"))),
    }
}

/// Decoration of a letter in a Bruhat stroll.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Decoration {
    /// Up, letter not taken.
    U0,
    /// Up, letter taken.
    U1,
    /// Down, letter not taken.
    D0,
    /// Down, letter taken.
    D1,
}

impl Decoration {
    /// Whether the stroll goes up at this letter.
    pub fn is_up(self) -> bool {
        matches!(self, Decoration::U0 | Decoration::U1)
    }

    /// The bit of the subexpression.
    pub fn bit(self) -> u8 {
        match self {
            Decoration::U1 | Decoration::D1 => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for Decoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Decoration::U0 => "U0",
            Decoration::U1 => "U1",
            Decoration::D0 => "D0",
            Decoration::D1 => "D1",
        };
        f.write_str(s)
    }
}

/// A subexpression with its Bruhat stroll and decorations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecoratedSubexpression {
    /// The word.
    pub word: CoxWord,
    /// The 01-sequence.
    pub bits: Vec<u8>,
    /// Decorations per letter.
    pub decorations: Vec<Decoration>,
    /// Stroll elements `x_0 = 1, x_1, …, x_ℓ`.
    pub stroll: Vec<Element>,
}

impl DecoratedSubexpression {
    /// `#U0 − #D0`.
    pub fn defect(&self) -> i32 {
        self.decorations.iter().map(|d| match d {
            Decoration::U0 => 1,
            Decoration::D0 => -1,
            _ => 0,
        }).sum()
    }

    /// The element expressed, `x_ℓ`.
    pub fn end(&self) -> Element {
        *self.stroll.last().unwrap()
    }
}

/// One braid move: at `pos`, the factor `first second first …` of length `m`
/// is replaced by `second first second …`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BraidMove {
    /// Start position of the factor.
    pub pos: usize,
    /// First letter of the factor being replaced.
    pub first: usize,
    /// Second letter of the factor being replaced.
    pub second: usize,
    /// Length of the factor, `m_{first,second}`.
    pub m: usize,
}

/// The alternating word `a b a b …` of length `m`.
pub fn alternating(a: usize, b: usize, m: usize) -> CoxWord {
    (0..m).map(|i| if i % 2 == 0 { a } else { b }).collect()
}

impl BraidMove {
    /// Applies the move to a word.
    pub fn apply(&self, word: &[usize]) -> Result<CoxWord> {
        let from = alternating(self.first, self.second, self.m);
        if word.len() < self.pos + self.m || word[self.pos..self.pos + self.m] != from[..] {
            return Err(Error::PlanInvalid(format!("braid move {self:?} does not apply")));
        }
        let mut out = word.to_vec();
        out[self.pos..self.pos + self.m].copy_from_slice(&alternating(self.second, self.first, self.m));
        Ok(out)
    }
}

/// A letter of a braid word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BraidLetter {
    /// Generator index.
    pub gen: usize,
    /// Whether the letter is `σ_s` (true) or `σ_s^{-1}` (false).
    pub positive: bool,
}

/// A braid word.
pub type BraidWord = Vec<BraidLetter>;

/// Drops the signs of a braid word.
pub fn coxeter_projection(w: &[BraidLetter]) -> CoxWord {
    w.iter().map(|l| l.gen).collect()
}

/// Attaches positive signs.
pub fn positive_lift(w: &[usize]) -> BraidWord {
    w.iter().map(|&gen| BraidLetter { gen, positive: true }).collect()
}

/// Attaches negative signs.
pub fn negative_lift(w: &[usize]) -> BraidWord {
    w.iter().map(|&gen| BraidLetter { gen, positive: false }).collect()
}

/// Number of positive letters minus number of negative letters.
pub fn writhe(w: &[BraidLetter]) -> i32 {
    w.iter().map(|l| if l.positive { 1 } else { -1 }).sum()
}

/// A finite Coxeter system together with a faithful exact realization.
#[derive(Debug)]
pub struct CoxeterSystem {
    names: Vec<String>,
    coxeter: Vec<Vec<u32>>,
    cartan: Vec<Vec<Scalar>>,
    matrices: Vec<Vec<Scalar>>,
    lengths: Vec<u32>,
    right: Vec<Vec<u32>>,
    left: Vec<Vec<u32>>,
    inverse: Vec<u32>,
    images: Vec<Vec<Polynomial>>,
    lexmin: Vec<CoxWord>,
    reflections: Vec<Element>,
    fingerprint: String,
}

impl CoxeterSystem {
    /// Loads a built-in preset.
    pub fn preset(name: &str) -> Result<CoxeterSystem> {
        let cfg = RealizationConfig::preset(name).ok_or_else(|| Error::InvalidRealization(format!("unknown preset `{name}`")))?;
        CoxeterSystem::from_config(&cfg)
    }

    /// Validates a realization and enumerates the group.
    pub fn from_config(cfg: &RealizationConfig) -> Result<CoxeterSystem> {
        let r = cfg.generators.len();
        if r == 0 {
            return Err(Error::InvalidRealization("no generators".into()));
        }
        if r > crate::ring::MAX_VARS {
            return Err(Error::InvalidRealization(format!("at most {} generators are supported", crate::ring::MAX_VARS)));
        }
        let distinct: BTreeSet<&String> = cfg.generators.iter().collect();
        if distinct.len() != r || cfg.generators.iter().any(|g| g.is_empty() || g.contains(char::is_whitespace) || g.ends_with('-')) {
            return Err(Error::InvalidRealization("generator names must be distinct, nonempty, without spaces or trailing '-'".into()));
        }
        if cfg.coxeter_matrix.len() != r || cfg.coxeter_matrix.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidRealization("coxeter matrix has the wrong shape".into()));
        }
        if cfg.cartan.len() != r || cfg.cartan.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidRealization("cartan matrix has the wrong shape".into()));
        }
        let m = cfg.coxeter_matrix.clone();
        for s in 0..r {
            for t in 0..r {
                if s == t && m[s][t] != 1 {
                    return Err(Error::InvalidRealization(format!("m[{s}][{s}] must be 1")));
                }
                if s != t && (m[s][t] < 2 || m[s][t] != m[t][s]) {
                    return Err(Error::InvalidRealization(format!("m[{s}][{t}] must be symmetric and at least 2")));
                }
            }
        }
        let cartan: Vec<Vec<Scalar>> = cfg.cartan.iter().map(|row| row.iter().map(parse_scalar).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        for s in 0..r {
            if cartan[s][s] != int(2) {
                return Err(Error::InvalidRealization(format!("⟨α_{0}, α_{0}^∨⟩ must be 2", cfg.generators[s])));
            }
        }
        let gens: Vec<Vec<Scalar>> = (0..r).map(|s| reflection_matrix(&cartan, s)).collect();
        let id = identity_matrix(r);
        for s in 0..r {
            for t in (s + 1)..r {
                let st = mat_mul(r, &gens[s], &gens[t]);
                let mut p = st.clone();
                for k in 1..=m[s][t] {
                    if p == id {
                        if k != m[s][t] {
                            return Err(Error::InvalidRealization(format!(
                                "order of {}{} is {k}, expected {}",
                                cfg.generators[s], cfg.generators[t], m[s][t]
                            )));
                        }
                        break;
                    }
                    if k == m[s][t] {
                        return Err(Error::InvalidRealization(format!(
                            "order of {}{} is not {}",
                            cfg.generators[s], cfg.generators[t], m[s][t]
                        )));
                    }
                    p = mat_mul(r, &p, &st);
                }
            }
        }
        let order = coset_enumeration_order(&m, 200 * MAX_GROUP_ORDER)
            .ok_or_else(|| Error::InvalidRealization("group is infinite or larger than the supported size".into()))?;
        if order > MAX_GROUP_ORDER {
            return Err(Error::InvalidRealization(format!("group order {order} exceeds {MAX_GROUP_ORDER}")));
        }
        // Orbit enumeration by exact matrices, breadth first so that BFS depth = length.
        let mut matrices: Vec<Vec<Scalar>> = vec![id.clone()];
        let mut lengths = vec![0u32];
        let mut index: HashMap<Vec<Scalar>, u32> = HashMap::new();
        index.insert(id, 0);
        let mut right: Vec<Vec<u32>> = Vec::new();
        let mut head = 0;
        while head < matrices.len() {
            let mut row = Vec::with_capacity(r);
            for g in &gens {
                let prod = mat_mul(r, &matrices[head], g);
                let idx = match index.get(&prod) {
                    Some(&i) => i,
                    None => {
                        let i = matrices.len() as u32;
                        if matrices.len() >= order {
                            return Err(Error::InvalidRealization(
                                "realization is not faithful: matrix orbit exceeds the group order".into(),
                            ));
                        }
                        index.insert(prod.clone(), i);
                        matrices.push(prod);
                        lengths.push(lengths[head] + 1);
                        i
                    }
                };
                row.push(idx);
            }
            right.push(row);
            head += 1;
        }
        if matrices.len() != order {
            return Err(Error::InvalidRealization(format!(
                "realization is not faithful: {} matrices for a group of order {order}",
                matrices.len()
            )));
        }
        let n = matrices.len();
        let mut left = vec![vec![0u32; r]; n];
        for (x, mx) in matrices.iter().enumerate() {
            for (s, g) in gens.iter().enumerate() {
                left[x][s] = index[&mat_mul(r, g, mx)];
            }
        }
        let images = matrices
            .iter()
            .map(|mx| (0..r).map(|j| Polynomial::linear(&(0..r).map(|i| mx[i * r + j].clone()).collect::<Vec<_>>())).collect())
            .collect();
        let mut order_by_len: Vec<usize> = (0..n).collect();
        order_by_len.sort_by_key(|&x| lengths[x]);
        let mut lexmin: Vec<CoxWord> = vec![Vec::new(); n];
        for &x in &order_by_len {
            if lengths[x] == 0 {
                continue;
            }
            let s = (0..r).find(|&s| lengths[left[x][s] as usize] < lengths[x]).unwrap();
            let mut w = vec![s];
            w.extend_from_slice(&lexmin[left[x][s] as usize]);
            lexmin[x] = w;
        }
        let walk = |start: usize, word: &[usize]| word.iter().fold(start, |acc, &s| right[acc][s] as usize);
        let inverse: Vec<u32> = (0..n)
            .map(|x| {
                let rev: Vec<usize> = lexmin[x].iter().rev().copied().collect();
                walk(0, &rev) as u32
            })
            .collect();
        let mut refl: BTreeSet<u32> = BTreeSet::new();
        for x in 0..n {
            for s in 0..r {
                let xs = right[x][s] as usize;
                refl.insert(walk(xs, &lexmin[inverse[x] as usize]) as u32);
            }
        }
        let fingerprint = format!(
            "gens={:?};m={:?};cartan={:?}",
            cfg.generators,
            m,
            cartan.iter().map(|row| row.iter().map(crate::ring::render_scalar).collect::<Vec<_>>()).collect::<Vec<_>>()
        );
        Ok(CoxeterSystem {
            names: cfg.generators.clone(),
            coxeter: m,
            cartan,
            matrices,
            lengths,
            right,
            left,
            inverse,
            images,
            lexmin,
            reflections: refl.into_iter().map(Element).collect(),
            fingerprint,
        })
    }

    /// Stable description of the realization data.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        self.names.len()
    }

    /// Generator names.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Index of a generator name.
    pub fn generator(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// `m_{st}`.
    pub fn m(&self, s: usize, t: usize) -> u32 {
        self.coxeter[s][t]
    }

    /// `⟨α_t, α_s^∨⟩`.
    pub fn pairing(&self, t: usize, s: usize) -> &Scalar {
        &self.cartan[s][t]
    }

    /// Group order.
    pub fn order(&self) -> usize {
        self.matrices.len()
    }

    /// All elements, in breadth-first (length-nondecreasing) order.
    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.matrices.len() as u32).map(Element)
    }

    /// Exact action matrix on 𝔥* in the α-basis (row-major; column j is the image of α_j).
    pub fn matrix(&self, x: Element) -> &[Scalar] {
        &self.matrices[x.0 as usize]
    }

    /// Length.
    pub fn length(&self, x: Element) -> u32 {
        self.lengths[x.0 as usize]
    }

    /// The generator `s` as an element.
    pub fn gen_element(&self, s: usize) -> Element {
        Element(self.right[0][s])
    }

    /// `x·s`.
    pub fn mul_gen_right(&self, x: Element, s: usize) -> Element {
        Element(self.right[x.0 as usize][s])
    }

    /// `s·x`.
    pub fn mul_gen_left(&self, s: usize, x: Element) -> Element {
        Element(self.left[x.0 as usize][s])
    }

    /// Product `x·y`.
    pub fn mul(&self, x: Element, y: Element) -> Element {
        let mut out = x;
        for &s in &self.lexmin[y.0 as usize] {
            out = self.mul_gen_right(out, s);
        }
        out
    }

    /// Inverse.
    pub fn inverse(&self, x: Element) -> Element {
        Element(self.inverse[x.0 as usize])
    }

    /// Element expressed by a word.
    pub fn element_of(&self, w: &[usize]) -> Element {
        w.iter().fold(Element::IDENTITY, |x, &s| self.mul_gen_right(x, s))
    }

    /// Whether the word is reduced.
    pub fn is_reduced(&self, w: &[usize]) -> bool {
        self.length(self.element_of(w)) as usize == w.len()
    }

    /// The lexicographically smallest reduced word for `x`.
    pub fn lexmin_word(&self, x: Element) -> &CoxWord {
        &self.lexmin[x.0 as usize]
    }

    /// The longest element.
    pub fn longest(&self) -> Element {
        Element(self.matrices.len() as u32 - 1)
    }

    /// Reflections of the group.
    pub fn reflections(&self) -> &[Element] {
        &self.reflections
    }

    /// Images of the simple roots under `x`, as linear polynomials.
    pub fn root_images(&self, x: Element) -> &[Polynomial] {
        &self.images[x.0 as usize]
    }

    /// The W-action on polynomials.
    pub fn act(&self, x: Element, f: &Polynomial) -> Polynomial {
        if x == Element::IDENTITY {
            return f.clone();
        }
        f.substitute(&self.images[x.0 as usize])
    }

    /// The W-action on rational functions.
    pub fn act_rf(&self, x: Element, f: &crate::ring::RationalFunction) -> crate::ring::RationalFunction {
        if x == Element::IDENTITY || f.is_zero() {
            return f.clone();
        }
        f.substitute(&self.images[x.0 as usize])
    }

    /// Demazure operator `∂_s(f) = (f − s f)/α_s`.
    pub fn demazure(&self, s: usize, f: &Polynomial) -> Polynomial {
        let diff = f.sub(&self.act(self.gen_element(s), f));
        diff.exact_div(&Polynomial::var(s)).expect("f − s(f) is divisible by α_s in a valid realization")
    }

    /// Right descent test: `x·s < x`.
    pub fn is_right_descent(&self, x: Element, s: usize) -> bool {
        self.length(self.mul_gen_right(x, s)) < self.length(x)
    }

    /// All reduced words of `x`, sorted.
    pub fn reduced_words(&self, x: Element) -> Vec<CoxWord> {
        if x == Element::IDENTITY {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for s in 0..self.rank() {
            if self.is_right_descent(x, s) {
                for mut w in self.reduced_words(self.mul_gen_right(x, s)) {
                    w.push(s);
                    out.push(w);
                }
            }
        }
        out.sort();
        out
    }

    /// Bruhat order via the transitive closure of the Bruhat graph.
    pub fn bruhat_leq(&self, x: Element, y: Element) -> bool {
        self.bruhat_down_set(y).contains(&x)
    }

    /// `{z : z ≤ y}` computed by descending along reflections.
    pub fn bruhat_down_set(&self, y: Element) -> BTreeSet<Element> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(y);
        queue.push_back(y);
        while let Some(z) = queue.pop_front() {
            for &t in &self.reflections {
                let zt = self.mul(z, t);
                if self.length(zt) < self.length(z) && seen.insert(zt) {
                    queue.push_back(zt);
                }
            }
        }
        seen
    }

    /// Bruhat order via the subword property on the lex-minimal reduced word of `y`.
    pub fn bruhat_leq_subword(&self, x: Element, y: Element) -> bool {
        let w = self.lexmin_word(y);
        (0u32..(1u32 << w.len())).any(|mask| self.element_of_sub(w, mask) == x)
    }

    /// Element expressed by the subexpression `mask` (bit j selects letter j).
    pub fn element_of_sub(&self, w: &[usize], mask: u32) -> Element {
        w.iter().enumerate().fold(Element::IDENTITY, |x, (j, &s)| if mask >> j & 1 == 1 { self.mul_gen_right(x, s) } else { x })
    }

    /// Elements expressed by every subexpression of `w`, indexed by mask.
    pub fn subexpression_elements(&self, w: &[usize]) -> Vec<Element> {
        let mut out = vec![Element::IDENTITY; 1 << w.len()];
        for mask in 1u32..(1u32 << w.len()) {
            let top = 31 - mask.leading_zeros();
            let rest = mask & !(1 << top);
            // Letters after `top` are absent from `mask`, so appending s_top is correct
            // only when `top` is the highest set bit, which it is.
            out[mask as usize] = self.mul_gen_right(out[rest as usize], w[top as usize]);
        }
        out
    }

    /// Decorates a subexpression.
    pub fn decorate(&self, w: &[usize], bits: &[u8]) -> Result<DecoratedSubexpression> {
        if w.len() != bits.len() {
            return Err(Error::LengthMismatch { word: w.len(), bits: bits.len() });
        }
        let mut stroll = vec![Element::IDENTITY];
        let mut decorations = Vec::with_capacity(w.len());
        for (&s, &b) in w.iter().zip(bits) {
            let x = *stroll.last().unwrap();
            let up = !self.is_right_descent(x, s);
            decorations.push(match (up, b) {
                (true, 0) => Decoration::U0,
                (true, _) => Decoration::U1,
                (false, 0) => Decoration::D0,
                (false, _) => Decoration::D1,
            });
            stroll.push(if b != 0 { self.mul_gen_right(x, s) } else { x });
        }
        Ok(DecoratedSubexpression { word: w.to_vec(), bits: bits.to_vec(), decorations, stroll })
    }

    /// Decorates the subexpression given as a bitmask.
    pub fn decorate_mask(&self, w: &[usize], mask: u32) -> DecoratedSubexpression {
        let bits: Vec<u8> = (0..w.len()).map(|j| (mask >> j & 1) as u8).collect();
        self.decorate(w, &bits).expect("lengths agree")
    }

    /// Braid moves applicable to a word.
    pub fn braid_moves(&self, w: &[usize]) -> Vec<BraidMove> {
        let mut out = Vec::new();
        for pos in 0..w.len() {
            if pos + 1 >= w.len() {
                break;
            }
            let (a, b) = (w[pos], w[pos + 1]);
            if a == b {
                continue;
            }
            let m = self.m(a, b) as usize;
            if pos + m <= w.len() && w[pos..pos + m] == alternating(a, b, m)[..] {
                out.push(BraidMove { pos, first: a, second: b, m });
            }
        }
        out
    }

    fn distances_from(&self, target: &[usize]) -> HashMap<CoxWord, usize> {
        let mut dist = HashMap::new();
        dist.insert(target.to_vec(), 0);
        let mut queue = VecDeque::from([target.to_vec()]);
        while let Some(w) = queue.pop_front() {
            let d = dist[&w];
            for mv in self.braid_moves(&w) {
                let nw = mv.apply(&w).unwrap();
                if !dist.contains_key(&nw) {
                    dist.insert(nw.clone(), d + 1);
                    queue.push_back(nw);
                }
            }
        }
        dist
    }

    /// Shortest braid-move path from `rw1` to `rw2`, lexicographically smallest among shortest.
    pub fn matsumoto_path(&self, rw1: &[usize], rw2: &[usize]) -> Result<Vec<BraidMove>> {
        if !self.is_reduced(rw1) || !self.is_reduced(rw2) {
            return Err(Error::NotReduced);
        }
        if self.element_of(rw1) != self.element_of(rw2) {
            return Err(Error::NotSameElement);
        }
        let dist = self.distances_from(rw2);
        let mut cur = rw1.to_vec();
        let mut path = Vec::new();
        while cur != rw2 {
            let d = dist[&cur];
            let (mv, nw) = self
                .braid_moves(&cur)
                .into_iter()
                .map(|mv| {
                    let nw = mv.apply(&cur).unwrap();
                    (mv, nw)
                })
                .filter(|(_, nw)| dist.get(nw) == Some(&(d - 1)))
                .min_by(|a, b| (a.0.pos, &a.1).cmp(&(b.0.pos, &b.1)))
                .expect("Matsumoto's theorem guarantees a path");
            path.push(mv);
            cur = nw;
        }
        Ok(path)
    }

    /// Path from a reduced word `x` to the closest reduced word ending in `s`.
    pub fn exchange_witness(&self, x: &[usize], s: usize) -> Result<Vec<BraidMove>> {
        if !self.is_reduced(x) {
            return Err(Error::NotReduced);
        }
        if !self.is_right_descent(self.element_of(x), s) {
            return Err(Error::NotInDescent);
        }
        let dist = self.distances_from(x);
        let target = dist
            .iter()
            .filter(|(w, _)| w.last() == Some(&s))
            .min_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)))
            .map(|(w, _)| w.clone())
            .expect("exchange property");
        self.matsumoto_path(x, &target)
    }

    /// Applies a sequence of braid moves.
    pub fn apply_path(&self, w: &[usize], path: &[BraidMove]) -> Result<CoxWord> {
        let mut cur = w.to_vec();
        for mv in path {
            cur = mv.apply(&cur)?;
        }
        Ok(cur)
    }

    /// Parses a space-separated Coxeter word such as `s t s` (or a compact `sts`
    /// when every generator name is a single character).
    pub fn parse_word(&self, text: &str) -> Result<CoxWord> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        if text.contains(char::is_whitespace) || self.names.iter().any(|n| n.chars().count() != 1) {
            return text.split_whitespace().map(|t| self.generator(t)).collect();
        }
        text.chars().map(|c| self.generator(&c.to_string())).collect()
    }

    /// Parses a braid word such as `s s t-` (a trailing `-` marks an inverse).
    pub fn parse_braid(&self, text: &str) -> Result<BraidWord> {
        text.split_whitespace()
            .map(|tok| {
                let (name, positive) = match tok.strip_suffix('-') {
                    Some(n) => (n, false),
                    None => (tok, true),
                };
                Ok(BraidLetter { gen: self.generator(name)?, positive })
            })
            .collect()
    }

    /// Renders a Coxeter word with generator names.
    pub fn render_word(&self, w: &[usize]) -> String {
        if self.names.iter().all(|n| n.chars().count() == 1) {
            w.iter().map(|&s| self.names[s].as_str()).collect()
        } else {
            w.iter().map(|&s| self.names[s].as_str()).collect::<Vec<_>>().join(" ")
        }
    }

    /// Renders a braid word as tokens, e.g. `s s t-`.
    pub fn render_braid(&self, w: &[BraidLetter]) -> String {
        w.iter().map(|l| format!("{}{}", self.names[l.gen], if l.positive { "" } else { "-" })).collect::<Vec<_>>().join(" ")
    }
}

fn identity_matrix(r: usize) -> Vec<Scalar> {
    let mut m = vec![Scalar::zero(); r * r];
    for i in 0..r {
        m[i * r + i] = Scalar::one();
    }
    m
}

fn reflection_matrix(cartan: &[Vec<Scalar>], s: usize) -> Vec<Scalar> {
    let r = cartan.len();
    let mut m = identity_matrix(r);
    for t in 0..r {
        // column t: s(α_t) = α_t − ⟨α_t, α_s^∨⟩ α_s
        m[s * r + t] -= &cartan[s][t];
    }
    m
}

fn mat_mul(r: usize, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); r * r];
    for i in 0..r {
        for k in 0..r {
            let aik = &a[i * r + k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..r {
                out[i * r + j] += aik * &b[k * r + j];
            }
        }
    }
    out
}

/// Order of the Coxeter group from its presentation, by Todd–Coxeter coset
/// enumeration over the trivial subgroup. Returns `None` past `limit` cosets.
pub fn coset_enumeration_order(m: &[Vec<u32>], limit: usize) -> Option<usize> {
    const NONE: usize = usize::MAX;
    let r = m.len();
    let mut relators: Vec<Vec<usize>> = Vec::new();
    for s in 0..r {
        for t in (s + 1)..r {
            let mut w = Vec::new();
            for _ in 0..m[s][t] {
                w.push(s);
                w.push(t);
            }
            relators.push(w);
        }
    }
    struct Table {
        rows: Vec<Vec<usize>>,
        parent: Vec<usize>,
        queue: Vec<usize>,
    }
    impl Table {
        fn rep(&mut self, mut c: usize) -> usize {
            let mut root = c;
            while self.parent[root] != root {
                root = self.parent[root];
            }
            while self.parent[c] != root {
                let next = self.parent[c];
                self.parent[c] = root;
                c = next;
            }
            root
        }
        fn merge(&mut self, a: usize, b: usize) {
            let (a, b) = (self.rep(a), self.rep(b));
            if a == b {
                return;
            }
            let (keep, drop) = if a < b { (a, b) } else { (b, a) };
            self.parent[drop] = keep;
            self.queue.push(drop);
        }
        fn coincidence(&mut self, a: usize, b: usize, r: usize) {
            self.queue.clear();
            self.merge(a, b);
            let mut i = 0;
            while i < self.queue.len() {
                let g = self.queue[i];
                i += 1;
                for x in 0..r {
                    let d = self.rows[g][x];
                    if d == NONE {
                        continue;
                    }
                    self.rows[d][x] = NONE;
                    self.rows[g][x] = NONE;
                    let mu = self.rep(g);
                    let nu = self.rep(d);
                    if self.rows[mu][x] != NONE {
                        let t = self.rows[mu][x];
                        self.merge(nu, t);
                    } else if self.rows[nu][x] != NONE {
                        let t = self.rows[nu][x];
                        self.merge(mu, t);
                    } else {
                        self.rows[mu][x] = nu;
                        self.rows[nu][x] = mu;
                    }
                }
            }
        }
    }
    let mut tab = Table { rows: vec![vec![NONE; r]], parent: vec![0], queue: Vec::new() };
    let define = |tab: &mut Table, c: usize, x: usize| -> bool {
        let n = tab.rows.len();
        if n >= limit {
            return false;
        }
        tab.rows.push(vec![NONE; r]);
        tab.parent.push(n);
        tab.rows[c][x] = n;
        tab.rows[n][x] = c;
        true
    };
    let mut c = 0;
    while c < tab.rows.len() {
        if tab.parent[c] == c {
            for w in &relators {
                if tab.rep(c) != c {
                    break;
                }
                // scan and fill
                let (mut f, mut b) = (c, c);
                let (mut i, mut j) = (0usize, w.len() as isize - 1);
                loop {
                    while (i as isize) <= j && tab.rows[f][w[i]] != NONE {
                        f = tab.rows[f][w[i]];
                        i += 1;
                    }
                    if (i as isize) > j {
                        if f != b {
                            tab.coincidence(f, b, r);
                        }
                        break;
                    }
                    while j >= i as isize && tab.rows[b][w[j as usize]] != NONE {
                        b = tab.rows[b][w[j as usize]];
                        j -= 1;
                    }
                    if j < i as isize {
                        tab.coincidence(f, b, r);
                        break;
                    } else if j == i as isize {
                        tab.rows[f][w[i]] = b;
                        tab.rows[b][w[i]] = f;
                        break;
                    } else if !define(&mut tab, f, w[i]) {
                        return None;
                    }
                }
            }
            if tab.rep(c) == c {
                for x in 0..r {
                    if tab.rows[c][x] == NONE && !define(&mut tab, c, x) {
                        return None;
                    }
                }
            }
        }
        c += 1;
    }
    Some((0..tab.rows.len()).filter(|&c| tab.parent[c] == c).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coset_enumeration_orders() {
        assert_eq!(coset_enumeration_order(&[vec![1, 3], vec![3, 1]], 100_000), Some(6));
        assert_eq!(coset_enumeration_order(&[vec![1, 4], vec![4, 1]], 100_000), Some(8));
        assert_eq!(coset_enumeration_order(&[vec![1, 6], vec![6, 1]], 100_000), Some(12));
        let a3 = vec![vec![1, 3, 2], vec![3, 1, 3], vec![2, 3, 1]];
        assert_eq!(coset_enumeration_order(&a3, 100_000), Some(24));
    }

    #[test]
    fn presets_load() {
        for (name, order) in [("A1xA1", 4), ("A2", 6), ("B2", 8), ("A3", 24), ("A1xA2", 12), ("G2", 12)] {
            let sys = CoxeterSystem::preset(name).unwrap();
            assert_eq!(sys.order(), order, "{name}");
        }
    }
}
