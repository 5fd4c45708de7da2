//! Dense-matrix oracle for at most eight qubits.
//!
//! Basis states are bit strings with site 0 as the most significant bit.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compiler::{DDGroup, TermSet};
use crate::field::{all_paulis, PauliString};
use crate::kitaev;
use crate::sequencer::{self, Schedule};
use crate::{Error, Result};

pub const MAX_QUBITS: usize = 8;

pub trait Real: Float + FromPrimitive + Send + Sync + Debug + 'static {}

impl<T: Float + FromPrimitive + Send + Sync + Debug + 'static> Real for T {}

fn c<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("representable constant")
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator<T> {
    pub n: usize,
    /// Row-major `2^n × 2^n` entries.
    pub data: Vec<Complex<T>>,
}

impl<T: Real> DenseOperator<T> {
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn zeros(n: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooLarge(format!("{n} qubits")));
        }
        Ok(DenseOperator { n, data: vec![Complex::zero(); 1 << (2 * n)] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        let d = m.dim();
        for i in 0..d {
            m.data[i * d + i] = Complex::one();
        }
        Ok(m)
    }

    pub fn get(&self, r: usize, col: usize) -> Complex<T> {
        self.data[r * self.dim() + col]
    }

    /// `coeff · P` as a dense matrix.
    pub fn from_pauli(p: &PauliString, coeff: T) -> Result<Self> {
        let mut m = Self::zeros(p.len())?;
        let d = m.dim();
        for b in 0..d {
            let (phase, out) = pauli_action::<T>(p, b);
            m.data[out * d + b] = phase * coeff;
        }
        Ok(m)
    }

    pub fn scale(&self, s: T) -> Self {
        self.scale_complex(Complex::new(s, T::zero()))
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        DenseOperator { n: self.n, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim();
        let mut out = self.clone();
        for r in 0..d {
            for col in 0..d {
                out.data[col * d + r] = self.data[r * d + col].conj();
            }
        }
        out
    }

    pub fn matmul(&self, o: &Self) -> Self {
        let d = self.dim();
        let mut out = vec![Complex::zero(); d * d];
        for i in 0..d {
            let row = &mut out[i * d..(i + 1) * d];
            for k in 0..d {
                let a = self.data[i * d + k];
                if a.is_zero() {
                    continue;
                }
                let orow = &o.data[k * d..(k + 1) * d];
                for (x, &b) in row.iter_mut().zip(orow) {
                    *x = *x + a * b;
                }
            }
        }
        DenseOperator { n: self.n, data: out }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim()).fold(Complex::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr()).sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, x| acc.max(x.norm()))
    }

    fn norm1(&self) -> T {
        let d = self.dim();
        (0..d)
            .map(|col| (0..d).fold(T::zero(), |acc, r| acc + self.get(r, col).norm()))
            .fold(T::zero(), T::max)
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        (self - &self.adjoint()).max_abs() <= tol
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        (&self.adjoint().matmul(self) - &Self::identity(self.n).unwrap()).max_abs() <= tol
    }

    /// `P · self · P` for a Pauli string `P`.
    pub fn conjugate(&self, p: &PauliString) -> Self {
        let d = self.dim();
        let phases: Vec<(Complex<T>, usize)> = (0..d).map(|b| pauli_action::<T>(p, b)).collect();
        let x = phases[0].1;
        let mut out = vec![Complex::zero(); d * d];
        for a in 0..d {
            // P|a⊕x⟩ = φ(a⊕x)|a⟩, so ⟨a|P = φ(a⊕x)⟨a⊕x|.
            let left = phases[a ^ x].0;
            for b in 0..d {
                out[a * d + b] = left * self.data[(a ^ x) * d + (b ^ x)] * phases[b].0;
            }
        }
        DenseOperator { n: self.n, data: out }
    }

    fn solve(a: &Self, b: &Self) -> Result<Self> {
        let d = a.dim();
        let mut m: Vec<Complex<T>> = a.data.clone();
        let mut x = b.data.clone();
        for col in 0..d {
            let piv = (col..d)
                .max_by(|&i, &j| m[i * d + col].norm().partial_cmp(&m[j * d + col].norm()).unwrap())
                .unwrap();
            if m[piv * d + col].norm() == T::zero() {
                return Err(Error::Invalid("singular Padé denominator".into()));
            }
            if piv != col {
                for k in 0..d {
                    m.swap(col * d + k, piv * d + k);
                    x.swap(col * d + k, piv * d + k);
                }
            }
            let inv = Complex::<T>::one() / m[col * d + col];
            for r in col + 1..d {
                let f = m[r * d + col] * inv;
                if f.is_zero() {
                    continue;
                }
                for k in col..d {
                    m[r * d + k] = m[r * d + k] - f * m[col * d + k];
                }
                for k in 0..d {
                    x[r * d + k] = x[r * d + k] - f * x[col * d + k];
                }
            }
        }
        for col in (0..d).rev() {
            let inv = Complex::<T>::one() / m[col * d + col];
            for k in 0..d {
                x[col * d + k] = x[col * d + k] * inv;
            }
            for r in 0..col {
                let f = m[r * d + col];
                if f.is_zero() {
                    continue;
                }
                for k in 0..d {
                    x[r * d + k] = x[r * d + k] - f * x[col * d + k];
                }
            }
        }
        Ok(DenseOperator { n: a.n, data: x })
    }

    /// Matrix exponential by degree-13 Padé approximation with scaling and squaring.
    pub fn expm(&self) -> Result<Self> {
        const B: [f64; 14] = [
            64764752532480000.0,
            32382376266240000.0,
            7771770303897600.0,
            1187353796428800.0,
            129060195264000.0,
            10559470521600.0,
            670442572800.0,
            33522128640.0,
            1323241920.0,
            40840800.0,
            960960.0,
            16380.0,
            182.0,
            1.0,
        ];
        let theta: T = c(5.371920351148152);
        let norm = self.norm1();
        let s = if norm > theta { (norm / theta).log2().ceil().to_i32().unwrap_or(0).max(0) } else { 0 };
        let a = self.scale(c::<T>(0.5).powi(s));
        let id = Self::identity(self.n)?;
        let b = |k: usize| c::<T>(B[k]);
        let a2 = a.matmul(&a);
        let a4 = a2.matmul(&a2);
        let a6 = a4.matmul(&a2);
        let u_inner = &(&a6.scale(b(13)) + &a4.scale(b(11))) + &a2.scale(b(9));
        let u = a.matmul(
            &(&(&(&(&a6.matmul(&u_inner) + &a6.scale(b(7))) + &a4.scale(b(5))) + &a2.scale(b(3))) + &id.scale(b(1))),
        );
        let v_inner = &(&a6.scale(b(12)) + &a4.scale(b(10))) + &a2.scale(b(8));
        let v = &(&(&(&a6.matmul(&v_inner) + &a6.scale(b(6))) + &a4.scale(b(4))) + &a2.scale(b(2))) + &id.scale(b(0));
        let mut r = Self::solve(&(&v - &u), &(&v + &u))?;
        for _ in 0..s {
            r = r.matmul(&r);
        }
        Ok(r)
    }

    /// `exp(−i t H)`.
    pub fn propagator(&self, t: T) -> Result<Self> {
        self.scale_complex(Complex::new(T::zero(), -t)).expm()
    }

    /// `Tr(P H) / 2^n` for every Pauli string with magnitude above `tol`.
    pub fn pauli_coefficients(&self, tol: T) -> BTreeMap<PauliString, Complex<T>> {
        let d = self.dim();
        let scale = T::one() / c(d as f64);
        all_paulis(self.n)
            .collect::<Vec<_>>()
            .into_par_iter()
            .filter_map(|p| {
                let mut acc = Complex::zero();
                for b in 0..d {
                    // ⟨b|P H|b⟩ = Σ_k ⟨b|P|k⟩ H_kb with P|k⟩ = φ|b⟩ for k = b⊕x.
                    let (phase, out) = pauli_action::<T>(&p, b);
                    // ⟨out|P|b⟩ = phase, so ⟨b|P|out⟩ = conj(phase) since P is Hermitian.
                    acc = acc + phase.conj() * self.get(out, b);
                }
                let v = acc * scale;
                (v.norm() > tol).then_some((p, v))
            })
            .collect()
    }
}

impl<T: Real> Add for &DenseOperator<T> {
    type Output = DenseOperator<T>;
    fn add(self, o: Self) -> DenseOperator<T> {
        DenseOperator { n: self.n, data: self.data.iter().zip(&o.data).map(|(&a, &b)| a + b).collect() }
    }
}

impl<T: Real> Sub for &DenseOperator<T> {
    type Output = DenseOperator<T>;
    fn sub(self, o: Self) -> DenseOperator<T> {
        DenseOperator { n: self.n, data: self.data.iter().zip(&o.data).map(|(&a, &b)| a - b).collect() }
    }
}

impl<T: Real> Mul for &DenseOperator<T> {
    type Output = DenseOperator<T>;
    fn mul(self, o: Self) -> DenseOperator<T> {
        self.matmul(o)
    }
}

/// `P|b⟩ = phase · |out⟩`, with `Y = iXZ` on each site.
pub fn pauli_action<T: Real>(p: &PauliString, b: usize) -> (Complex<T>, usize) {
    let n = p.len();
    let (mut x, mut z, mut ys) = (0usize, 0usize, 0u32);
    for i in 0..n {
        let bit = 1 << (n - 1 - i);
        if p.x_bit(i) {
            x |= bit;
        }
        if p.z_bit(i) {
            z |= bit;
        }
        if p.x_bit(i) && p.z_bit(i) {
            ys += 1;
        }
    }
    let sign = if (z & b).count_ones() % 2 == 1 { -T::one() } else { T::one() };
    let phase = match ys % 4 {
        0 => Complex::new(sign, T::zero()),
        1 => Complex::new(T::zero(), sign),
        2 => Complex::new(-sign, T::zero()),
        _ => Complex::new(T::zero(), -sign),
    };
    (phase, b ^ x)
}

/// `Σ coeff · P`; a missing coefficient counts as one.
pub fn build_hamiltonian<T: Real>(ts: &TermSet) -> Result<DenseOperator<T>> {
    let mut h = DenseOperator::zeros(ts.n)?;
    for t in &ts.terms {
        let coeff = c(t.coeff.unwrap_or(1.0));
        h = &h + &DenseOperator::from_pauli(&t.pauli, coeff)?;
    }
    Ok(h)
}

/// `(1/|F|) Σ_f f H f` over a list of Pauli frames.
pub fn frame_average<T: Real>(frames: &[PauliString], h: &DenseOperator<T>) -> Result<DenseOperator<T>> {
    let mut acc = DenseOperator::zeros(h.n)?;
    for f in frames {
        if f.len() != h.n {
            return Err(Error::LengthMismatch(f.len(), h.n));
        }
        acc = &acc + &h.conjugate(f);
    }
    Ok(acc.scale(T::one() / c(frames.len().max(1) as f64)))
}

/// `(1/|G|) Σ_g g H g`.
pub fn first_order_twirl<T: Real>(g: &DDGroup, h: &DenseOperator<T>) -> Result<DenseOperator<T>> {
    frame_average(&g.elements()?, h)
}

/// One free-evolution cycle `Π_j f_j U_Δ f_j`, earliest slot rightmost.
pub fn cycle_propagator<T: Real>(s: &Schedule, h: &DenseOperator<T>, delta: T) -> Result<DenseOperator<T>> {
    let u = h.propagator(delta)?;
    let mut acc = DenseOperator::identity(h.n)?;
    for f in &s.frames {
        acc = u.conjugate(f).matmul(&acc);
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport<T> {
    pub deltas: Vec<T>,
    /// `‖U_cycle − exp(−i L Δ H̄)‖` (Frobenius) per `Δ`.
    pub residuals: Vec<T>,
    /// Least-squares slope of `log residual` against `log Δ`.
    pub slope: Option<T>,
    /// Pauli coefficients of the first-order effective Hamiltonian (real parts).
    pub coefficients: BTreeMap<String, T>,
}

/// Log-spaced values from `lo` to `hi` inclusive.
pub fn log_space<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    if count < 2 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|i| (a + (b - a) * c(i as f64 / (count - 1) as f64)).exp()).collect()
}

fn fit_slope<T: Real>(xs: &[T], ys: &[T]) -> Option<T> {
    let pts: Vec<(T, T)> =
        xs.iter().zip(ys).filter(|(_, &y)| y > T::zero()).map(|(&x, &y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n: T = c(pts.len() as f64);
    let mx = pts.iter().fold(T::zero(), |a, p| a + p.0) / n;
    let my = pts.iter().fold(T::zero(), |a, p| a + p.1) / n;
    let sxy = pts.iter().fold(T::zero(), |a, p| a + (p.0 - mx) * (p.1 - my));
    let sxx = pts.iter().fold(T::zero(), |a, p| a + (p.0 - mx) * (p.0 - mx));
    (sxx > T::zero()).then(|| sxy / sxx)
}

/// Stroboscopic deviation from the first-order effective evolution.
pub fn stroboscopic_error<T: Real>(s: &Schedule, h: &DenseOperator<T>, deltas: &[T]) -> Result<SimReport<T>> {
    if s.chi != h.n {
        return Err(Error::LengthMismatch(s.chi, h.n));
    }
    let hbar = frame_average(&s.frames, h)?;
    let len: T = c(s.cycle_length as f64);
    let residuals = deltas
        .par_iter()
        .map(|&d| {
            let exact = cycle_propagator(s, h, d)?;
            let ideal = hbar.propagator(len * d)?;
            Ok((&exact - &ideal).norm())
        })
        .collect::<Result<Vec<T>>>()?;
    let tol: T = c(1e-12);
    let coefficients = hbar.pauli_coefficients(tol).into_iter().map(|(p, v)| (p.to_string(), v.re)).collect();
    Ok(SimReport { slope: fit_slope(deltas, &residuals), deltas: deltas.to_vec(), residuals, coefficients })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KitaevCheck {
    /// `‖twirl(⟨W1, W2⟩, H_analog) + H_comb‖`.
    pub twirl_residual: f64,
    /// `‖Σ_P P (−H_comb) P − H_comb‖`.
    pub sign_flip_residual: f64,
    /// `‖H̄_cycle − H_comb / 3‖` for the twelve-slot cycle.
    pub cycle_residual: f64,
    /// `‖twirl‖` when the identity joins the conjugators; the engineered terms cancel.
    pub with_identity_norm: f64,
    pub cycle_length: usize,
    pub coefficients: BTreeMap<String, f64>,
}

impl KitaevCheck {
    pub fn passed(&self, tol: f64) -> bool {
        self.twirl_residual <= tol
            && self.sign_flip_residual <= tol
            && self.cycle_residual <= tol
            && self.cycle_length == 12
            && self.with_identity_norm <= tol
    }
}

/// Numerical check of the Kitaev construction at `J = 1`.
pub fn kitaev_verify() -> Result<KitaevCheck> {
    let inst = kitaev::instance()?;
    let h_analog = build_hamiltonian::<f64>(&inst.h_analog(1.0))?;
    let h_comb = build_hamiltonian::<f64>(&inst.h_comb(1.0))?;
    let pair = DDGroup::new(kitaev::SITES, inst.w[..2].to_vec())?;
    let twirled = first_order_twirl(&pair, &h_analog)?;
    let twirl_residual = (&twirled + &h_comb).norm();
    let flipped = inst
        .conjugators
        .iter()
        .fold(DenseOperator::zeros(kitaev::SITES)?, |acc, p| &acc + &twirled.conjugate(p));
    let sign_flip_residual = (&flipped - &h_comb).norm();
    let cycle = sequencer::kitaev_cycle()?;
    let hbar = frame_average(&cycle.frames, &h_analog)?;
    let cycle_residual = (&hbar - &h_comb.scale(1.0 / 3.0)).norm();
    let mut with_id: Vec<PauliString> = vec![PauliString::identity(kitaev::SITES)];
    with_id.extend(inst.conjugators.iter().cloned());
    let with_identity_norm = frame_average(&with_id, &twirled)?.norm();
    let coefficients = hbar.pauli_coefficients(1e-12).into_iter().map(|(p, v)| (p.to_string(), v.re)).collect();
    Ok(KitaevCheck {
        twirl_residual,
        sign_flip_residual,
        cycle_residual,
        with_identity_norm,
        cycle_length: cycle.cycle_length,
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::Role;
    use approx::assert_abs_diff_eq;

    type M = DenseOperator<f64>;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn single_z_is_diagonal() {
        let ts = TermSet::from_paulis(1, &[p("Z")], Some(1.0), Role::Suppress).unwrap();
        let h: M = build_hamiltonian(&ts).unwrap();
        assert_eq!(h.get(0, 0).re, 1.0);
        assert_eq!(h.get(1, 1).re, -1.0);
        assert_eq!(h.get(0, 1).norm(), 0.0);
    }

    #[test]
    fn y_matrix_and_site_order() {
        let y = M::from_pauli(&p("Y"), 1.0).unwrap();
        assert_eq!(y.get(1, 0), Complex::new(0.0, 1.0));
        assert_eq!(y.get(0, 1), Complex::new(0.0, -1.0));
        let xi = M::from_pauli(&p("XI"), 1.0).unwrap();
        assert_eq!(xi.get(2, 0).re, 1.0);
    }

    #[test]
    fn pauli_products_match_matrices() {
        for a in all_paulis(2) {
            for b in all_paulis(2) {
                let prod = M::from_pauli(&a, 1.0).unwrap().matmul(&M::from_pauli(&b, 1.0).unwrap());
                let phase_free = M::from_pauli(&(&a * &b), 1.0).unwrap();
                // Equal up to a global phase.
                assert_abs_diff_eq!(prod.adjoint().matmul(&phase_free).trace().norm(), 4.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn conjugation_matches_products() {
        let h = &M::from_pauli(&p("XYZ"), 0.3).unwrap() + &M::from_pauli(&p("ZZI"), -0.7).unwrap();
        for f in ["XII", "YZX", "IIZ"] {
            let fm = M::from_pauli(&p(f), 1.0).unwrap();
            let direct = fm.matmul(&h).matmul(&fm);
            assert!((&direct - &h.conjugate(&p(f))).max_abs() < 1e-14);
        }
    }

    #[test]
    fn expm_of_pauli_rotation() {
        let x = M::from_pauli(&p("X"), 1.0).unwrap();
        for t in [0.1, 1.0, 7.5, 40.0] {
            let u = x.propagator(t).unwrap();
            assert_abs_diff_eq!(u.get(0, 0).re, t.cos(), epsilon = 1e-12);
            assert_abs_diff_eq!(u.get(1, 0).im, -t.sin(), epsilon = 1e-12);
            assert!(u.is_unitary(1e-12));
        }
    }

    #[test]
    fn expm_commuting_sum() {
        let h = &M::from_pauli(&p("ZZ"), 0.4).unwrap() + &M::from_pauli(&p("XX"), 1.3).unwrap();
        let u = h.propagator(2.0).unwrap();
        let a = M::from_pauli(&p("ZZ"), 0.4).unwrap().propagator(2.0).unwrap();
        let b = M::from_pauli(&p("XX"), 1.3).unwrap().propagator(2.0).unwrap();
        assert!((&u - &a.matmul(&b)).max_abs() < 1e-12);
    }

    #[test]
    fn coefficients_reconstruct() {
        let h = &(&M::from_pauli(&p("XYZ"), 0.3).unwrap() + &M::from_pauli(&p("ZIZ"), -0.7).unwrap())
            + &M::from_pauli(&p("IIY"), 0.05).unwrap();
        let coeffs = h.pauli_coefficients(1e-14);
        assert_eq!(coeffs.len(), 3);
        let mut back = M::zeros(3).unwrap();
        for (q, v) in &coeffs {
            back = &back + &M::from_pauli(q, 1.0).unwrap().scale_complex(*v);
        }
        assert!((&back - &h).max_abs() < 1e-12);
    }

    #[test]
    fn identity_group_leaves_h() {
        let h = M::from_pauli(&p("XZ"), 0.5).unwrap();
        let t = first_order_twirl(&DDGroup::trivial(2), &h).unwrap();
        assert!((&t - &h).max_abs() < 1e-15);
    }

    #[test]
    fn xy4_kills_single_qubit_field() {
        let ts = TermSet {
            n: 1,
            terms: ["X", "Y", "Z"]
                .iter()
                .zip([0.3, -0.2, 0.5])
                .map(|(s, v)| crate::compiler::Term { pauli: p(s), coeff: Some(v), role: Role::Suppress })
                .collect(),
        };
        let h: M = build_hamiltonian(&ts).unwrap();
        let g = DDGroup::from_strs(&["X", "Y"]).unwrap();
        assert!(first_order_twirl(&g, &h).unwrap().max_abs() < 1e-15);
        let s = sequencer::emit_bang_bang(&g, None).unwrap();
        let r = stroboscopic_error(&s, &h, &log_space(1e-3, 1e-1, 7)).unwrap();
        let slope = r.slope.unwrap();
        assert!((1.8..=2.2).contains(&slope), "slope {slope}");
        assert!(r.residuals.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn single_precision_twirl() {
        let h = DenseOperator::<f32>::from_pauli(&p("ZZ"), 0.5).unwrap();
        let g = DDGroup::from_strs(&["XI"]).unwrap();
        assert!(first_order_twirl(&g, &h).unwrap().max_abs() < 1e-6);
    }

    #[test]
    fn kitaev_checks_pass() {
        let k = kitaev_verify().unwrap();
        assert!(k.passed(1e-12), "{k:?}");
        assert_eq!(k.coefficients.len(), 9);
        assert!(k.coefficients.values().all(|&v| (v + 1.0 / 12.0).abs() < 1e-12));
    }
}
