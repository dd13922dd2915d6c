//! Order-by-order construction of the quartic eigenoperator `ã`, the spacing
//! function `λ(H)` and the ground level `e_g`.
//!
//! The ansatz is `ã = a + (κ/4) F + (κ²/2) G` with
//! `F = −3(a² − a†²)a + (a + a†)³ + f₁ a + f₂ a†` and `G` made of fixed
//! fifth-degree terms plus `g₁a³ + g₂a†a² + g₃a†²a + g₄a†³ + g₅a + g₆a†`.
//! The fixed parts come from the semiclassical expansion; the `f`s and `g`s
//! are the ordering constants. `λ(H) = Σ_i L_i(κ) h^i` with `h = H + 1/2`.

use std::fmt;

use num::{One, Zero};
use thiserror::Error;

use super::coeff::{rational, CouplingPoly, Rational};
use super::linsolve::{analyze, LinearAnalysis};
use super::poly::OperatorPoly;
use crate::oscillator::OscillatorSpec;

/// The three operator identities imposed on the ansatz.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constraint {
    /// `[ã, H] − λ(H) ã = 0`
    Eigenoperator,
    /// `ã†ã + e_g − H = 0`
    Factorization,
    /// `[ã, ã†] − λ(H) = 0`
    Normalization,
}

impl Constraint {
    pub const ALL: [Constraint; 3] = [
        Constraint::Eigenoperator,
        Constraint::Factorization,
        Constraint::Normalization,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Constraint::Eigenoperator => "[a~,H] - lambda(H) a~",
            Constraint::Factorization => "a~^dag a~ + e_g - H",
            Constraint::Normalization => "[a~,a~^dag] - lambda(H)",
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum AlgebraError {
    #[error("eigenoperator construction needs the quartic oscillator")]
    NotQuartic,
    #[error("order {0} not supported (expected 0, 1 or 2)")]
    UnsupportedOrder(usize),
    #[error("constraints inconsistent at order {order}; residual of {constraint:?}: {residual}")]
    Inconsistent {
        order: usize,
        constraint: Constraint,
        residual: OperatorPoly,
    },
    #[error("constraints leave {free:?} undetermined at order {order}")]
    Underdetermined { order: usize, free: Vec<String> },
}

/// What one subset of constraints fixes on its own at a given order.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintDiagnostics {
    pub constraints: Vec<Constraint>,
    pub order: usize,
    pub rank: usize,
    pub unknowns: usize,
    pub consistent: bool,
    pub determined: Vec<(String, Rational)>,
    pub free: Vec<String>,
}

/// Solved ordering constant that differs from its published reference.
#[derive(Clone, Debug, PartialEq)]
pub struct Discrepancy {
    pub name: String,
    pub solved: Rational,
    pub reference: Rational,
}

#[derive(Clone, Debug)]
pub struct TildeASolution {
    pub order: usize,
    pub tilde_a: OperatorPoly,
    /// `L_i(κ)`, coefficient of `(H + 1/2)^i` in `λ(H)`.
    pub lambda: Vec<CouplingPoly>,
    pub ground_level: CouplingPoly,
    /// `f₁, f₂, g₁ … g₆` as far as the order reaches.
    pub constants: Vec<(String, Rational)>,
    pub diagnostics: Vec<ConstraintDiagnostics>,
    pub discrepancies: Vec<Discrepancy>,
}

impl TildeASolution {
    pub fn constant(&self, name: &str) -> Option<&Rational> {
        self.constants.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// `λ(e)` for a numeric energy and coupling.
    pub fn lambda_at(&self, e: f64, kappa: f64) -> f64 {
        let h = e + 0.5;
        self.lambda
            .iter()
            .rev()
            .fold(0.0, |acc, l| acc * h + l.eval(kappa))
    }

    /// `λ(H)` as a normal-ordered polynomial, given `H`.
    pub fn lambda_operator(&self, hamiltonian: &OperatorPoly) -> OperatorPoly {
        let mo = hamiltonian.max_order();
        let h = hamiltonian + &OperatorPoly::constant_rational(mo, 1, 2);
        let mut out = OperatorPoly::zero(mo);
        let mut hp = OperatorPoly::identity(mo);
        for l in &self.lambda {
            out = &out + &hp.scale_poly(l);
            hp = &hp * &h;
        }
        out
    }

    /// Residual of one constraint, normal ordered.
    pub fn residual(&self, constraint: Constraint, hamiltonian: &OperatorPoly) -> OperatorPoly {
        let lam = self.lambda_operator(hamiltonian);
        residual_of(constraint, &self.tilde_a, hamiltonian, &lam, &self.ground_level)
    }
}

fn residual_of(
    constraint: Constraint,
    tilde_a: &OperatorPoly,
    h: &OperatorPoly,
    lam: &OperatorPoly,
    eg: &CouplingPoly,
) -> OperatorPoly {
    let mo = h.max_order();
    match constraint {
        Constraint::Eigenoperator => &tilde_a.commutator(h) - &(lam * tilde_a),
        Constraint::Factorization => {
            &(&(&tilde_a.dagger() * tilde_a) + &OperatorPoly::constant(mo, eg.clone())) - h
        }
        Constraint::Normalization => &tilde_a.commutator(&tilde_a.dagger()) - lam,
    }
}

/// Published values of the ordering constants, checked against the solve.
fn reference_constants() -> Vec<(&'static str, Rational)> {
    vec![
        ("f1", rational(3, 1)),
        ("f2", rational(3, 1)),
        ("g1", rational(75, 4)),
        ("g2", rational(-135, 8)),
        ("g3", rational(-135, 4)),
        ("g4", rational(-3, 8)),
        ("g5", rational(-153, 8)),
        ("g6", rational(-27, 2)),
    ]
}

/// Fixed fifth-degree part of `G` as `(r, s, coefficient)`.
const G_FIXED: [(u32, u32, i64, i64); 6] = [
    (0, 5, 3, 2),
    (1, 4, 39, 4),
    (2, 3, -25, 8),
    (3, 2, -12, 1),
    (4, 1, -3, 8),
    (5, 0, 1, 4),
];

/// Monomials multiplying `g₁ … g₆`.
const G_FREE: [(u32, u32); 6] = [(0, 3), (1, 2), (2, 1), (3, 0), (0, 1), (1, 0)];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    F(usize),
    G(usize),
    /// `c_{j,i}`: coefficient of `κ^j h^i` in λ.
    Lambda(usize, usize),
    /// Coefficient of `κ^j` in `e_g`.
    Ground(usize),
}

impl Slot {
    fn name(self) -> String {
        match self {
            Slot::F(i) => format!("f{}", i + 1),
            Slot::G(i) => format!("g{}", i + 1),
            Slot::Lambda(j, i) => format!("lambda[k^{j} h^{i}]"),
            Slot::Ground(j) => format!("e_g[k^{j}]"),
        }
    }
}

#[derive(Clone, Debug)]
struct Assignment {
    f: [Rational; 2],
    g: [Rational; 6],
    /// `c[j][i]` for `i ≤ j`.
    c: Vec<Vec<Rational>>,
    e: Vec<Rational>,
}

impl Assignment {
    fn new(max_order: usize) -> Self {
        let mut c: Vec<Vec<Rational>> = (0..=max_order).map(|j| vec![Rational::zero(); j + 1]).collect();
        c[0][0] = Rational::one();
        let mut e = vec![Rational::zero(); max_order + 1];
        e[0] = rational(1, 2);
        Self {
            f: [Rational::zero(), Rational::zero()],
            g: std::array::from_fn(|_| Rational::zero()),
            c,
            e,
        }
    }

    fn get(&self, s: Slot) -> &Rational {
        match s {
            Slot::F(i) => &self.f[i],
            Slot::G(i) => &self.g[i],
            Slot::Lambda(j, i) => &self.c[j][i],
            Slot::Ground(j) => &self.e[j],
        }
    }

    fn set(&mut self, s: Slot, v: Rational) {
        match s {
            Slot::F(i) => self.f[i] = v,
            Slot::G(i) => self.g[i] = v,
            Slot::Lambda(j, i) => self.c[j][i] = v,
            Slot::Ground(j) => self.e[j] = v,
        }
    }

    fn lambda_polys(&self, mo: usize) -> Vec<CouplingPoly> {
        (0..=mo)
            .map(|i| {
                let coeffs: Vec<Rational> = (0..=mo)
                    .map(|j| self.c[j].get(i).cloned().unwrap_or_else(Rational::zero))
                    .collect();
                CouplingPoly::from_coeffs(mo, &coeffs)
            })
            .collect()
    }

    fn ground(&self, mo: usize) -> CouplingPoly {
        CouplingPoly::from_coeffs(mo, &self.e)
    }
}

fn slots_at(order: usize) -> Vec<Slot> {
    let mut out = Vec::new();
    match order {
        1 => out.extend([Slot::F(0), Slot::F(1)]),
        2 => out.extend((0..6).map(Slot::G)),
        _ => {}
    }
    out.extend((0..=order).map(|i| Slot::Lambda(order, i)));
    out.push(Slot::Ground(order));
    out
}

struct Builder {
    mo: usize,
    h: OperatorPoly,
    hpow: Vec<OperatorPoly>,
    f_fixed: OperatorPoly,
    g_fixed: OperatorPoly,
}

impl Builder {
    fn new(mo: usize, h: OperatorPoly) -> Self {
        let a = OperatorPoly::annihilation(mo);
        let ad = OperatorPoly::creation(mo);
        let x = OperatorPoly::position_sum(mo);
        let a2_minus_ad2 = &(&a * &a) - &(&ad * &ad);
        let f_fixed = &(&a2_minus_ad2 * &a).scale(&rational(-3, 1)) + &x.pow(3);
        let mut g_fixed = OperatorPoly::zero(mo);
        for (r, s, p, q) in G_FIXED {
            g_fixed = &g_fixed + &OperatorPoly::monomial(mo, r, s, rational(p, q));
        }
        let hh = &h + &OperatorPoly::constant_rational(mo, 1, 2);
        let mut hpow = vec![OperatorPoly::identity(mo)];
        for i in 1..=mo {
            let next = &hpow[i - 1] * &hh;
            hpow.push(next);
        }
        Self {
            mo,
            h,
            hpow,
            f_fixed,
            g_fixed,
        }
    }

    fn tilde_a(&self, x: &Assignment) -> OperatorPoly {
        let mo = self.mo;
        let mut out = OperatorPoly::annihilation(mo);
        if mo >= 1 {
            let f = &(&self.f_fixed + &OperatorPoly::monomial(mo, 0, 1, x.f[0].clone()))
                + &OperatorPoly::monomial(mo, 1, 0, x.f[1].clone());
            out = &out + &f.scale_poly(&CouplingPoly::kappa_power(mo, 1).scale_rational(1, 4));
        }
        if mo >= 2 {
            let mut g = self.g_fixed.clone();
            for (k, &(r, s)) in G_FREE.iter().enumerate() {
                g = &g + &OperatorPoly::monomial(mo, r, s, x.g[k].clone());
            }
            out = &out + &g.scale_poly(&CouplingPoly::kappa_power(mo, 2).scale_rational(1, 2));
        }
        out
    }

    fn lambda_op(&self, x: &Assignment) -> OperatorPoly {
        let mut out = OperatorPoly::zero(self.mo);
        for (i, l) in x.lambda_polys(self.mo).iter().enumerate() {
            if !l.is_zero() {
                out = &out + &self.hpow[i].scale_poly(l);
            }
        }
        out
    }

    fn residual(&self, c: Constraint, x: &Assignment) -> OperatorPoly {
        let at = self.tilde_a(x);
        let lam = self.lambda_op(x);
        residual_of(c, &at, &self.h, &lam, &x.ground(self.mo))
    }
}

/// Rows of the affine system at `order` for one constraint, as
/// `(monomial key, [∂R/∂x_k ... | −R(x₀)])`.
fn constraint_rows(b: &Builder, c: Constraint, base: &Assignment, slots: &[Slot], order: usize) -> Vec<Vec<Rational>> {
    let r0 = b.residual(c, base).order_slice(order);
    let mut cols = Vec::with_capacity(slots.len());
    for &s in slots {
        let mut x = base.clone();
        let bumped = x.get(s) + Rational::one();
        x.set(s, bumped);
        cols.push(b.residual(c, &x).order_slice(order));
    }
    let mut keys: Vec<(u32, u32)> = r0.keys().copied().collect();
    for col in &cols {
        keys.extend(col.keys().copied());
    }
    keys.sort_unstable();
    keys.dedup();
    keys.iter()
        .map(|k| {
            let base_v = r0.get(k).cloned().unwrap_or_else(Rational::zero);
            let mut row: Vec<Rational> = cols
                .iter()
                .map(|col| col.get(k).cloned().unwrap_or_else(Rational::zero) - &base_v)
                .collect();
            row.push(-base_v);
            row
        })
        .collect()
}

fn diagnostics_for(set: &[Constraint], order: usize, slots: &[Slot], rows: Vec<Vec<Rational>>) -> (ConstraintDiagnostics, LinearAnalysis) {
    let an = analyze(rows, slots.len());
    let determined = slots
        .iter()
        .zip(&an.determined)
        .filter_map(|(s, d)| d.clone().map(|v| (s.name(), v)))
        .collect();
    let free = an.free_unknowns().into_iter().map(|i| slots[i].name()).collect();
    (
        ConstraintDiagnostics {
            constraints: set.to_vec(),
            order,
            rank: an.rank,
            unknowns: slots.len(),
            consistent: an.consistent,
            determined,
            free,
        },
        an,
    )
}

/// Solves for the ordering constants, `λ(H)` and `e_g` through `order` in κ.
pub fn solve_tilde_a(order: usize, spec: &OscillatorSpec) -> Result<TildeASolution, AlgebraError> {
    if !spec.is_quartic() {
        return Err(AlgebraError::NotQuartic);
    }
    if order > 2 {
        return Err(AlgebraError::UnsupportedOrder(order));
    }
    let mo = order;
    let h = OscillatorSpec::quartic(0.0)
        .hamiltonian_poly(mo.max(1))
        .expect("polynomial")
        .with_max_order(mo);
    let b = Builder::new(mo, h);
    let mut x = Assignment::new(mo);
    let mut diagnostics = Vec::new();

    for j in 1..=order {
        let slots = slots_at(j);
        let per: Vec<(Constraint, Vec<Vec<Rational>>)> = Constraint::ALL
            .iter()
            .map(|&c| (c, constraint_rows(&b, c, &x, &slots, j)))
            .collect();

        let subsets: Vec<Vec<Constraint>> = vec![
            vec![Constraint::Eigenoperator],
            vec![Constraint::Factorization],
            vec![Constraint::Normalization],
            vec![Constraint::Eigenoperator, Constraint::Normalization],
            Constraint::ALL.to_vec(),
        ];
        let mut joint = None;
        for set in &subsets {
            let rows: Vec<Vec<Rational>> = per
                .iter()
                .filter(|(c, _)| set.contains(c))
                .flat_map(|(_, r)| r.iter().cloned())
                .collect();
            let (d, an) = diagnostics_for(set, j, &slots, rows);
            diagnostics.push(d);
            if set.len() == Constraint::ALL.len() {
                joint = Some(an);
            }
        }
        let joint = joint.expect("joint set analysed");

        if !joint.consistent {
            let mut trial = x.clone();
            for (k, &s) in slots.iter().enumerate() {
                trial.set(s, joint.particular[k].clone());
            }
            let (constraint, residual) = Constraint::ALL
                .iter()
                .map(|&c| (c, b.residual(c, &trial)))
                .find(|(_, r)| !r.vanishes_through(j))
                .unwrap_or((Constraint::Eigenoperator, b.residual(Constraint::Eigenoperator, &trial)));
            return Err(AlgebraError::Inconsistent {
                order: j,
                constraint,
                residual,
            });
        }
        if !joint.is_unique() {
            return Err(AlgebraError::Underdetermined {
                order: j,
                free: joint.free_unknowns().into_iter().map(|i| slots[i].name()).collect(),
            });
        }
        for (k, &s) in slots.iter().enumerate() {
            x.set(s, joint.particular[k].clone());
        }
    }

    let mut constants = Vec::new();
    if order >= 1 {
        constants.push(("f1".to_string(), x.f[0].clone()));
        constants.push(("f2".to_string(), x.f[1].clone()));
    }
    if order >= 2 {
        for (i, g) in x.g.iter().enumerate() {
            constants.push((format!("g{}", i + 1), g.clone()));
        }
    }
    let discrepancies = reference_constants()
        .into_iter()
        .filter_map(|(name, reference)| {
            let solved = constants.iter().find(|(n, _)| n == name)?.1.clone();
            (solved != reference).then(|| Discrepancy {
                name: name.to_string(),
                solved,
                reference,
            })
        })
        .collect();

    let mut lambda = x.lambda_polys(mo);
    while lambda.len() > 1 && lambda.last().is_some_and(CouplingPoly::is_zero) {
        lambda.pop();
    }
    Ok(TildeASolution {
        order,
        tilde_a: b.tilde_a(&x),
        lambda,
        ground_level: x.ground(mo),
        constants,
        diagnostics,
        discrepancies,
    })
}

impl fmt::Display for TildeASolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order = {}", self.order)?;
        for (n, v) in &self.constants {
            writeln!(f, "{n} = {v}")?;
        }
        for (i, l) in self.lambda.iter().enumerate() {
            writeln!(f, "lambda[h^{i}] = {l}")?;
        }
        writeln!(f, "e_g = {}", self.ground_level)?;
        write!(f, "a~ = {}", self.tilde_a)
    }
}

/// Float view of `e_g(κ)`.
pub fn ground_level_at(sol: &TildeASolution, kappa: f64) -> f64 {
    sol.ground_level.eval(kappa)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartic_h(mo: usize) -> OperatorPoly {
        OscillatorSpec::quartic(0.0).hamiltonian_poly(mo.max(1)).unwrap().with_max_order(mo)
    }

    #[test]
    fn order_zero_is_the_harmonic_triple() {
        let s = solve_tilde_a(0, &OscillatorSpec::quartic(0.1)).unwrap();
        assert_eq!(s.tilde_a, OperatorPoly::annihilation(0));
        assert_eq!(s.lambda, vec![CouplingPoly::one(0)]);
        assert_eq!(s.ground_level, CouplingPoly::constant(0, rational(1, 2)));
    }

    #[test]
    fn first_order() {
        let s = solve_tilde_a(1, &OscillatorSpec::quartic(0.1)).unwrap();
        assert_eq!(s.constant("f1"), Some(&rational(3, 1)));
        assert_eq!(s.constant("f2"), Some(&rational(3, 1)));
        assert_eq!(s.lambda[0].to_string(), "1");
        assert_eq!(s.lambda[1].to_string(), "3 k");
        assert_eq!(s.ground_level.to_string(), "1/2 + 3/4 k");
        assert!(s.discrepancies.is_empty());
    }

    #[test]
    fn second_order_residuals_vanish() {
        let s = solve_tilde_a(2, &OscillatorSpec::quartic(0.1)).unwrap();
        let h = quartic_h(2);
        for c in Constraint::ALL {
            assert!(s.residual(c, &h).is_zero(), "{c:?}");
        }
        assert_eq!(s.ground_level.to_string(), "1/2 + 3/4 k - 21/8 k^2");
        assert_eq!(s.lambda[0].to_string(), "1 - 15/2 k^2");
        assert_eq!(s.lambda[1].to_string(), "3 k + 9/2 k^2");
        assert_eq!(s.lambda[2].to_string(), "-69/4 k^2");
    }

    #[test]
    fn non_quartic_rejected() {
        assert_eq!(
            solve_tilde_a(1, &OscillatorSpec::sho()).unwrap_err(),
            AlgebraError::NotQuartic
        );
    }
}
