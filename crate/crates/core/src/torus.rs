//! Mapping classes of the torus: classification, RL words, flip fillings and torsion.
//!
//! A one-vertex triangulation of `T²` is recorded by a matrix `M = [a b]` of determinant one;
//! its edges are `a`, `b` and `a + b` and its affine fundamental cycle is
//! `z(M) = (0; a, a+b) − (0; b, a+b)`. Right multiplication by `R` or `L` is a diagonal flip
//! and is realised by a single affine tetrahedron `t` with `∂t = z(M') − z(M)`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::affine::{apply_linear, grid_cycle, AffineChain, AffineSimplex};
use crate::chain::{Chain, CoeffMode};
use crate::error::{Error, Result};
use crate::linalg::{snf, Mat2};
use crate::rational::{int_rat, Int, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Classification {
    Elliptic { order: u32 },
    Parabolic,
    /// `|tr| > 2`; the expanding eigenvalue is `(|t| + √(t²−4))/2` up to sign.
    Anosov {
        #[serde(with = "crate::rational::serde_int")]
        trace: Int,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingClass2T {
    pub matrix: Mat2,
    pub class: Classification,
}

impl MappingClass2T {
    /// Exact description of the expanding eigenvalue, e.g. `(3+√5)/2`.
    pub fn lambda(&self) -> Option<String> {
        let Classification::Anosov { trace } = &self.class else {
            return None;
        };
        let disc = trace * trace - Int::from(4);
        Some(format!("({trace}+√{disc})/2"))
    }

    pub fn finite_order(&self) -> Option<u32> {
        match self.class {
            Classification::Elliptic { order } => Some(order),
            _ => None,
        }
    }
}

pub fn classify(a: &Mat2) -> Result<MappingClass2T> {
    a.check_sl2()?;
    let t = a.trace();
    let class = if t.abs() > Int::from(2) {
        Classification::Anosov { trace: t }
    } else {
        match t.to_i64().expect("small trace") {
            0 => Classification::Elliptic { order: 4 },
            1 => Classification::Elliptic { order: 6 },
            -1 => Classification::Elliptic { order: 3 },
            2 if a.is_identity() => Classification::Elliptic { order: 1 },
            -2 if a.neg().is_identity() => Classification::Elliptic { order: 2 },
            _ => Classification::Parabolic,
        }
    };
    Ok(MappingClass2T {
        matrix: a.clone(),
        class,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    R,
    L,
    RInv,
    LInv,
}

impl Letter {
    pub fn matrix(self) -> Mat2 {
        match self {
            Letter::R => Mat2::r(),
            Letter::L => Mat2::l(),
            Letter::RInv => Mat2::new(1, -1, 0, 1),
            Letter::LInv => Mat2::new(1, 0, -1, 1),
        }
    }

    fn base(self) -> (char, i64) {
        match self {
            Letter::R => ('R', 1),
            Letter::L => ('L', 1),
            Letter::RInv => ('R', -1),
            Letter::LInv => ('L', -1),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base() {
            (c, 1) => write!(f, "{c}"),
            (c, e) => write!(f, "{c}^{e}"),
        }
    }
}

/// `C⁻¹·B·C = letters₁⋯letters_n` where `B = A`, or `B = A²` when `squared` (negative trace).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RLWord {
    pub conjugator: Mat2,
    pub letters: Vec<Letter>,
    pub squared: bool,
}

impl RLWord {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn product(&self) -> Mat2 {
        self.letters.iter().fold(Mat2::identity(), |m, l| m.mul(&l.matrix()))
    }

    /// The matrix the word represents: `C·W·C⁻¹`.
    pub fn represented(&self) -> Mat2 {
        self.product()
            .conjugate_by(&self.conjugator)
            .expect("conjugator is unimodular")
    }

    /// Letters one after another, e.g. `RRL`.
    pub fn plain(&self) -> String {
        self.letters.iter().map(|l| l.to_string()).collect()
    }

    /// Runs collapsed into powers, e.g. `R^2L`.
    pub fn exponent_form(&self) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.letters.len() {
            let (c, e) = self.letters[i].base();
            let mut total = e;
            let mut j = i + 1;
            while j < self.letters.len() && self.letters[j].base() == (c, e) {
                total += e;
                j += 1;
            }
            if total == 1 {
                out.push(c);
            } else {
                out.push_str(&format!("{c}^{total}"));
            }
            i = j;
        }
        out
    }

    /// True if the words agree up to cyclic rotation.
    pub fn cyclically_equal(&self, other: &RLWord) -> bool {
        let n = self.letters.len();
        if n != other.letters.len() || self.squared != other.squared {
            return false;
        }
        n == 0 || (0..n).any(|s| (0..n).all(|i| self.letters[(i + s) % n] == other.letters[i]))
    }
}

/// `p + q·√disc` with exact sign.
#[derive(Clone, Debug)]
struct Surd {
    p: Int,
    q: Int,
}

impl Surd {
    fn sign(&self, disc: &Int) -> i32 {
        let sp = self.p.signum();
        let sq = self.q.signum();
        if sq.is_zero() {
            return sp.to_i32().unwrap();
        }
        if sp.is_zero() || sp == sq {
            return sq.to_i32().unwrap();
        }
        // opposite signs: compare p² with q²·disc
        let lhs = &self.p * &self.p;
        let rhs = &self.q * &self.q * disc;
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sp.to_i32().unwrap(),
            std::cmp::Ordering::Less => sq.to_i32().unwrap(),
            std::cmp::Ordering::Equal => 0,
        }
    }

    fn sub(&self, o: &Surd) -> Surd {
        Surd {
            p: &self.p - &o.p,
            q: &self.q - &o.q,
        }
    }

    fn lin(m: &Int, x: &Surd, n: &Int, y: &Surd) -> Surd {
        Surd {
            p: m * &x.p + n * &y.p,
            q: m * &x.q + n * &y.q,
        }
    }
}

/// Positive word for `A` with `tr A > 2`, by descending the Farey cones towards the
/// expanding eigenline until the conjugate becomes a nonnegative matrix.
fn anosov_word(a: &Mat2) -> (Mat2, Vec<Letter>) {
    let disc = a.trace() * a.trace() - Int::from(4);
    let two = Int::from(2);
    let e: [Surd; 2] = if !a.b.is_zero() {
        [
            Surd { p: &two * &a.b, q: Int::zero() },
            Surd { p: &a.d - &a.a, q: Int::one() },
        ]
    } else {
        [
            Surd { p: &a.a - &a.d, q: Int::one() },
            Surd { p: &two * &a.c, q: Int::zero() },
        ]
    };
    let coords = |b: &Mat2| -> [Surd; 2] {
        let inv = b.inverse().expect("basis is unimodular");
        [
            Surd::lin(&inv.a, &e[0], &inv.b, &e[1]),
            Surd::lin(&inv.c, &e[0], &inv.d, &e[1]),
        ]
    };
    let quarter = Mat2::new(0, -1, 1, 0);
    let mut basis = Mat2::identity();
    for _ in 0..4 {
        let c = coords(&basis);
        if c[0].sign(&disc) > 0 && c[1].sign(&disc) > 0 {
            break;
        }
        basis = basis.mul(&quarter);
    }
    let [mut alpha, mut beta] = coords(&basis);
    loop {
        let m = a.conjugate_by(&basis.inverse().expect("unimodular")).expect("unimodular");
        if m.is_nonnegative() {
            return (basis, peel(m));
        }
        if alpha.sub(&beta).sign(&disc) > 0 {
            basis = basis.mul(&Mat2::r());
            alpha = alpha.sub(&beta);
        } else {
            basis = basis.mul(&Mat2::l());
            beta = beta.sub(&alpha);
        }
    }
}

/// Factorises a nonnegative matrix of determinant one into `R` and `L`.
fn peel(mut m: Mat2) -> Vec<Letter> {
    let mut rev = Vec::new();
    while !m.is_identity() {
        if m.a >= m.b && m.c >= m.d {
            m = m.mul(&Letter::LInv.matrix());
            rev.push(Letter::L);
        } else {
            m = m.mul(&Letter::RInv.matrix());
            rev.push(Letter::R);
        }
    }
    rev.reverse();
    rev
}

/// `C` with `C⁻¹AC = Rⁿ` for `A ≠ I` of trace 2.
fn parabolic_word(a: &Mat2) -> (Mat2, Vec<Letter>) {
    let n = a.minus_identity();
    let (r0, r1) = if !(n.a.is_zero() && n.b.is_zero()) {
        (n.a.clone(), n.b.clone())
    } else {
        (n.c.clone(), n.d.clone())
    };
    let g = r0.gcd(&r1);
    let (p, q) = (&r1 / &g, -(&r0 / &g));
    // p·y − q·x = 1
    let ext = p.extended_gcd(&q);
    let (y, x) = (ext.x * &ext.gcd, -(ext.y * &ext.gcd));
    let c = Mat2::from_ints(p, x, q, y);
    debug_assert!(c.det().is_one());
    let conj = a.conjugate_by(&c.inverse().expect("unimodular")).expect("unimodular");
    let k = conj.b.to_i64().expect("parabolic translation length fits in i64");
    let letter = if k > 0 { Letter::R } else { Letter::RInv };
    (c, vec![letter; k.unsigned_abs() as usize])
}

/// RL word of an Anosov or parabolic class. Classes with negative trace are handled
/// through their square.
pub fn rl_word(a: &Mat2) -> Result<RLWord> {
    let mc = classify(a)?;
    if let Classification::Elliptic { .. } = mc.class {
        return Err(Error::TraceTooSmall(a.trace().to_string()));
    }
    let squared = a.trace().is_negative();
    let b = if squared { a.mul(a) } else { a.clone() };
    let (conjugator, letters) = if b.trace() > Int::from(2) {
        anosov_word(&b)
    } else {
        parabolic_word(&b)
    };
    let w = RLWord {
        conjugator,
        letters,
        squared,
    };
    debug_assert_eq!(w.represented(), b);
    Ok(w)
}

/// A one-vertex triangulation of the torus given by two edge vectors with `det[a b] = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlipState(Mat2);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlipEdge {
    /// Replace `a` by `a + 2b` (right multiplication by `L`).
    First,
    /// Replace `b` by `2a + b` (right multiplication by `R`).
    Second,
    /// Replace the diagonal `a + b` by `a − b`.
    Diagonal,
}

impl FlipState {
    pub fn new(m: Mat2) -> Result<Self> {
        if !m.det().is_one() {
            return Err(Error::InadmissibleFlip(format!("edge vectors have determinant {}", m.det())));
        }
        Ok(FlipState(m))
    }

    pub fn standard() -> Self {
        FlipState(Mat2::identity())
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    /// The three edge vectors `a`, `b`, `a + b`.
    pub fn edges(&self) -> [[Int; 2]; 3] {
        let (a, b) = self.0.columns();
        let s = [&a[0] + &b[0], &a[1] + &b[1]];
        [a, b, s]
    }

    /// `z = (0; a, a+b) − (0; b, a+b)`.
    pub fn cycle(&self) -> AffineChain {
        apply_linear(&self.0, &grid_cycle(1)).expect("state is unimodular")
    }

    /// The flip `M ↦ M·letter` and its tetrahedron.
    pub fn apply(&self, letter: Letter) -> (FlipState, AffineChain) {
        let (a, b) = self.0.columns();
        let v = |x: [Int; 2]| [int_rat(x[0].clone()), int_rat(x[1].clone())];
        let sum = |x: &[Int; 2], y: &[Int; 2]| [&x[0] + &y[0], &x[1] + &y[1]];
        let ab = sum(&a, &b);
        let (disp, sign) = match letter {
            Letter::R => (vec![a.clone(), ab.clone(), sum(&a, &ab)], 1),
            Letter::L => (vec![b.clone(), ab.clone(), sum(&ab, &b)], -1),
            Letter::RInv => (vec![a.clone(), b.clone(), ab.clone()], -1),
            Letter::LInv => (vec![b.clone(), a.clone(), ab.clone()], 1),
        };
        let zero = [Rat::zero(), Rat::zero()];
        let t = AffineSimplex::new(zero, disp.into_iter().map(v).collect());
        let next = FlipState(self.0.mul(&letter.matrix()));
        (next, Chain::from_int_terms(3, [(t, sign)]))
    }
}

pub fn flip_tetrahedron(s: &FlipState, edge: FlipEdge) -> Result<(FlipState, AffineChain)> {
    let s = FlipState::new(s.0.clone())?;
    Ok(s.apply(match edge {
        FlipEdge::First => Letter::L,
        FlipEdge::Second => Letter::R,
        FlipEdge::Diagonal => Letter::LInv,
    }))
}

/// A filling `c` of `Aᵐ_#(z) − z` assembled from flip tetrahedra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordFilling {
    pub m: u64,
    /// The fundamental cycle `z(C)` of the conjugator's triangulation.
    pub cycle: AffineChain,
    pub chain: AffineChain,
    /// `‖c‖₁`.
    pub bound: Rat,
    pub flips: usize,
}

impl WordFilling {
    pub fn target(&self, a: &Mat2) -> AffineChain {
        apply_linear(&a.pow(self.m), &self.cycle)
            .expect("unimodular")
            .sub(&self.cycle)
            .expect("same mode")
    }
}

/// Fills `Aᵐ_#(z) − z` for `z = z(C)` by running the flip sequence `C → C·Wᵐ = Aᵐ·C`.
/// For negative trace the word describes `A²` and only even `m` are available.
pub fn word_filling(a: &Mat2, m: u64) -> Result<WordFilling> {
    a.check_sl2()?;
    if m == 0 {
        return Err(Error::Parse("m must be positive".into()));
    }
    if a.pow(m).is_identity() {
        let z = grid_cycle(1);
        return Ok(WordFilling {
            m,
            cycle: z,
            chain: Chain::zero(3, CoeffMode::Z),
            bound: Rat::zero(),
            flips: 0,
        });
    }
    let w = rl_word(a).map_err(|_| Error::NoFilling(format!("{a} has finite order and A^{m} ≠ I")))?;
    let reps = if w.squared {
        if m % 2 == 1 {
            return Err(Error::NoFilling(format!("word describes A², odd m = {m} unavailable")));
        }
        m / 2
    } else {
        m
    };
    let mut state = FlipState(w.conjugator.clone());
    let cycle = state.cycle();
    let mut chain = Chain::zero(3, CoeffMode::Z);
    let mut flips = 0;
    for _ in 0..reps {
        for &letter in &w.letters {
            let (next, t) = state.apply(letter);
            chain.add_assign(&t).expect("degree-3 integral chains");
            state = next;
            flips += 1;
        }
    }
    debug_assert_eq!(state.0, a.pow(m).mul(&w.conjugator));
    Ok(WordFilling {
        m,
        bound: chain.l1_norm(),
        cycle,
        chain,
        flips,
    })
}

/// `tr(Aᵐ)` by the recursion `t_{k+1} = t·t_k − t_{k−1}`, `t₀ = 2`.
pub fn trace_power(a: &Mat2, m: u64) -> Int {
    let t = a.trace();
    let (mut prev, mut cur) = (Int::from(2), t.clone());
    if m == 0 {
        return prev;
    }
    for _ in 1..m {
        let next = &t * &cur - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `tr(Aᵐ) − 2`, the torsion order of `H₁` of the torus bundle with monodromy `Aᵐ`.
pub fn tors_order(a: &Mat2, m: u64) -> Result<Int> {
    a.check_sl2()?;
    let t = trace_power(a, m);
    if t <= Int::from(2) {
        return Err(Error::TraceTooSmall(t.to_string()));
    }
    Ok(t - Int::from(2))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionRow {
    pub m: u64,
    pub trace: Int,
    /// `tr(Aᵐ) − 2` when the trace exceeds 2.
    pub trace_minus_two: Option<Int>,
    /// `|det(Aᵐ − I)|` as the product of the Smith invariants.
    pub det_abs: Int,
    pub torsion: Vec<Int>,
    pub matches: Option<bool>,
}

pub fn torsion_row(a: &Mat2, m: u64) -> Result<TorsionRow> {
    a.check_sl2()?;
    let trace = trace_power(a, m);
    let s = snf(&a.pow(m).minus_identity().to_int_matrix());
    let det_abs: Int = s.diagonal.iter().fold(Int::one(), |acc, d| acc * d.abs());
    let det_abs = if s.diagonal.len() < 2 { Int::zero() } else { det_abs };
    let trace_minus_two = (trace > Int::from(2)).then(|| &trace - Int::from(2));
    let matches = trace_minus_two.as_ref().map(|t| *t == det_abs);
    Ok(TorsionRow {
        m,
        trace,
        trace_minus_two,
        det_abs,
        torsion: s.torsion(),
        matches,
    })
}

/// Whether `(tr Aᵐ − 2)^v ≥ 2^{12·m·u}` for `q = u/v`, i.e. `log(tr Aᵐ − 2)/(6·m·log 4) ≥ q`.
pub fn power_test(trace_minus_two: &Int, m: u64, q: &Rat) -> bool {
    if !q.is_positive() {
        return true;
    }
    if trace_minus_two <= &Int::one() {
        return false;
    }
    let u = q.numer().to_u64().expect("numerator fits in u64");
    let v = q.denom().to_u64().expect("denominator fits in u64");
    let exp = 12u128 * m as u128 * u as u128;
    let bits = trace_minus_two.bits() as u128;
    if v as u128 * (bits - 1) >= exp {
        return true;
    }
    if v as u128 * bits <= exp {
        return false;
    }
    let lhs = num_traits::pow(trace_minus_two.clone(), v as usize);
    lhs >= (Int::one() << (exp as usize))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerCertificate {
    pub m: u64,
    pub q: Rat,
    pub trace_minus_two: Int,
    pub pass: bool,
}

/// Certifies `FV_ℤ(A) ≥ q` through `FV_ℤ ≥ log λ/(6 log 4) > log(tr Aᵐ − 2)/(6·m·log 4)`.
pub fn fv_lower_certificate(a: &Mat2, m: u64, q: &Rat) -> Result<LowerCertificate> {
    let t = tors_order(a, m)?;
    Ok(LowerCertificate {
        m,
        q: q.clone(),
        pass: power_test(&t, m, q),
        trace_minus_two: t,
    })
}
