//! Concrete right modules over the toroidal Hecke algebra.
//!
//! Two families are provided. [`OneDimModule`] is the `l = 1` character
//! `X ↦ a`, `Y ↦ b`, which exists only when `x = 1`. [`PolynomialModule`] acts
//! on Laurent monomials `X^μ`, `μ ∈ ℤ^l`: `X_j` multiplies, `T_i` is a
//! Demazure–Lusztig operator, and `Y_1 = Π·T_{l-1}⋯T_1` where `Π` is a cyclic
//! shift with scale `ξ` on the first exponent.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::Params;
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("no one-dimensional module: x = {0} but x = 1 is required")]
    NoOneDimModule(String),
    #[error("invalid module parameters: {0}")]
    InvalidParameters(String),
    #[error("window {window} too small: {reason}")]
    EnlargeWindow { window: i32, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HModuleKey {
    Unit,
    Monomial(Vec<i32>),
}

impl fmt::Display for HModuleKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HModuleKey::Unit => write!(f, "1"),
            HModuleKey::Monomial(mu) => {
                let parts: Vec<String> = mu.iter().map(|e| e.to_string()).collect();
                write!(f, "X^[{}]", parts.join(","))
            }
        }
    }
}

pub type HModuleVector = SparseVec<HModuleKey>;

/// Largest absolute exponent seen in each coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Extent(pub Vec<i32>);

impl Extent {
    pub fn observe(&mut self, key: &HModuleKey) {
        if let HModuleKey::Monomial(mu) = key {
            if self.0.len() < mu.len() {
                self.0.resize(mu.len(), 0);
            }
            for (e, m) in self.0.iter_mut().zip(mu) {
                *e = (*e).max(m.abs());
            }
        }
    }

    pub fn observe_vec(&mut self, v: &HModuleVector) {
        for k in v.keys() {
            self.observe(k);
        }
    }

    pub fn merge(&mut self, other: &Extent) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), 0);
        }
        for (e, o) in self.0.iter_mut().zip(&other.0) {
            *e = (*e).max(*o);
        }
    }

    pub fn sup(&self) -> i32 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

/// Tracks whether an evaluation stayed inside the box `[-N, N]^l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowBudget {
    pub window: Option<i32>,
    pub extent: Extent,
}

impl WindowBudget {
    pub fn unbounded() -> Self {
        WindowBudget { window: None, extent: Extent::default() }
    }

    pub fn new(window: Option<i32>) -> Self {
        WindowBudget { window, extent: Extent::default() }
    }

    pub fn observe(&mut self, key: &HModuleKey) {
        self.extent.observe(key);
    }

    pub fn observe_vec(&mut self, v: &HModuleVector) {
        self.extent.observe_vec(v);
    }

    /// Remaining safety margin per coordinate (negative once escaped).
    pub fn margin(&self) -> Vec<i64> {
        match self.window {
            None => vec![],
            Some(n) => self.extent.0.iter().map(|&e| n as i64 - e as i64).collect(),
        }
    }

    pub fn is_valid(&self) -> bool {
        match self.window {
            None => true,
            Some(n) => self.extent.sup() <= n,
        }
    }
}

/// Versioned, serializable description of a module instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleDescriptor {
    pub version: u32,
    pub family: String,
    pub l: usize,
    pub q: Scalar,
    pub x: Scalar,
    pub y: Scalar,
    pub window: Option<i32>,
    pub xi: Option<Scalar>,
    pub a: Option<Scalar>,
    pub b: Option<Scalar>,
    pub corrupted_t: bool,
}

/// Right action `v ↦ v·g` of the generators.
///
/// Indices are 1-based and assumed valid; [`crate::hecke::apply_word`]
/// validates words before they reach a module.
pub trait RightHeckeModule: Send + Sync + fmt::Debug {
    fn l(&self) -> usize;
    fn q(&self) -> &Scalar;
    fn x(&self) -> &Scalar;
    fn y(&self) -> &Scalar;
    fn window(&self) -> Option<i32>;
    fn descriptor(&self) -> ModuleDescriptor;

    fn act_x(&self, j: usize, e: i64, v: &HModuleVector, b: &mut WindowBudget) -> HModuleVector;
    fn act_t(&self, i: usize, v: &HModuleVector, b: &mut WindowBudget) -> HModuleVector;
    fn act_y(&self, j: usize, e: i64, v: &HModuleVector, b: &mut WindowBudget) -> HModuleVector;

    /// `T^{-1} = q^{-2}(T − (q² − 1))`
    fn act_t_inv(&self, i: usize, v: &HModuleVector, b: &mut WindowBudget) -> HModuleVector {
        let q2 = self.q().upow(2);
        let mut w = self.act_t(i, v, b);
        w.add_scaled(v, &(Scalar::one() - &q2));
        w.scaled(&q2.upow(-1))
    }

    fn new_budget(&self) -> WindowBudget {
        WindowBudget::new(self.window())
    }
}

/// `l = 1` character.
#[derive(Debug, Clone)]
pub struct OneDimModule {
    q: Scalar,
    x: Scalar,
    y: Scalar,
    a: Scalar,
    b: Scalar,
}

impl OneDimModule {
    pub fn new(a: Scalar, b: Scalar, params: &Params) -> Result<Self, ModuleError> {
        if params.l != 1 {
            return Err(ModuleError::InvalidParameters(format!("l = {} but the character needs l = 1", params.l)));
        }
        if !params.x.is_one() {
            return Err(ModuleError::NoOneDimModule(params.x.to_string()));
        }
        for (name, v) in [("a", &a), ("b", &b)] {
            if !v.is_unit() {
                return Err(ModuleError::InvalidParameters(format!("{} = {} is not a unit", name, v)));
            }
        }
        Ok(OneDimModule { q: params.q.clone(), x: params.x.clone(), y: params.y.clone(), a, b })
    }

    pub fn unit() -> HModuleVector {
        HModuleVector::basis(HModuleKey::Unit)
    }
}

impl RightHeckeModule for OneDimModule {
    fn l(&self) -> usize {
        1
    }
    fn q(&self) -> &Scalar {
        &self.q
    }
    fn x(&self) -> &Scalar {
        &self.x
    }
    fn y(&self) -> &Scalar {
        &self.y
    }
    fn window(&self) -> Option<i32> {
        None
    }

    fn descriptor(&self) -> ModuleDescriptor {
        ModuleDescriptor {
            version: 1,
            family: "l1".into(),
            l: 1,
            q: self.q.clone(),
            x: self.x.clone(),
            y: self.y.clone(),
            window: None,
            xi: None,
            a: Some(self.a.clone()),
            b: Some(self.b.clone()),
            corrupted_t: false,
        }
    }

    fn act_x(&self, _j: usize, e: i64, v: &HModuleVector, _b: &mut WindowBudget) -> HModuleVector {
        v.scaled(&self.a.upow(e))
    }

    fn act_t(&self, i: usize, _v: &HModuleVector, _b: &mut WindowBudget) -> HModuleVector {
        panic!("T_{} does not exist when l = 1", i)
    }

    fn act_y(&self, _j: usize, e: i64, v: &HModuleVector, _b: &mut WindowBudget) -> HModuleVector {
        v.scaled(&self.b.upow(e))
    }
}

type YCache = RwLock<HashMap<(usize, bool, Vec<i32>), HModuleVector>>;

/// Laurent-monomial module.
#[derive(Debug)]
pub struct PolynomialModule {
    l: usize,
    q: Scalar,
    q2: Scalar,
    q2_minus_1: Scalar,
    t_lead: Scalar,
    x: Scalar,
    y: Scalar,
    xi: Scalar,
    window: i32,
    corrupted_t: bool,
    y_cache: YCache,
}

impl Clone for PolynomialModule {
    fn clone(&self) -> Self {
        PolynomialModule {
            l: self.l,
            q: self.q.clone(),
            q2: self.q2.clone(),
            q2_minus_1: self.q2_minus_1.clone(),
            t_lead: self.t_lead.clone(),
            x: self.x.clone(),
            y: self.y.clone(),
            xi: self.xi.clone(),
            window: self.window,
            corrupted_t: self.corrupted_t,
            y_cache: RwLock::new(HashMap::new()),
        }
    }
}

impl PolynomialModule {
    pub fn new(params: &Params, window: i32) -> Result<Self, ModuleError> {
        Self::build(params, window, false)
    }

    /// Negative control: `T_i` uses `q³` where `q²` belongs.
    pub fn corrupted(params: &Params, window: i32) -> Result<Self, ModuleError> {
        Self::build(params, window, true)
    }

    fn build(params: &Params, window: i32, corrupted_t: bool) -> Result<Self, ModuleError> {
        if params.l < 2 {
            return Err(ModuleError::InvalidParameters("the polynomial module needs l >= 2".into()));
        }
        if window < 1 {
            return Err(ModuleError::EnlargeWindow { window, reason: "N >= 1".into() });
        }
        let xi = derive_shift_scale(params.l, &params.q, &params.x, &params.y);
        Ok(Self::with_scale(params, window, corrupted_t, xi))
    }

    fn with_scale(params: &Params, window: i32, corrupted_t: bool, xi: Scalar) -> Self {
        let q2 = params.q.upow(2);
        let t_lead = if corrupted_t { params.q.upow(3) } else { q2.clone() };
        PolynomialModule {
            l: params.l,
            q: params.q.clone(),
            q2_minus_1: &q2 - &Scalar::one(),
            q2,
            t_lead,
            x: params.x.clone(),
            y: params.y.clone(),
            xi,
            window,
            corrupted_t,
            y_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn xi(&self) -> &Scalar {
        &self.xi
    }

    pub fn monomial(mu: Vec<i32>) -> HModuleVector {
        HModuleVector::basis(HModuleKey::Monomial(mu))
    }

    fn t_monomial(&self, i: usize, mu: &[i32], c: &Scalar, out: &mut HModuleVector) {
        let (a, b) = (mu[i - 1], mu[i]);
        let mut s = mu.to_vec();
        s.swap(i - 1, i);
        out.add_term(HModuleKey::Monomial(s), c * &self.t_lead);
        if a == b {
            return;
        }
        // (q² − 1)·X_{i+1}·(s_i f − f)/(X_i − X_{i+1}) telescopes between μ and s_i μ
        let (lo, hi) = (a.min(b), a.max(b));
        let coeff = if b > a { c * &self.q2_minus_1 } else { -(c * &self.q2_minus_1) };
        for k in 0..(hi - lo) {
            let mut m = mu.to_vec();
            m[i - 1] = lo + k;
            m[i] = hi - k;
            out.add_term(HModuleKey::Monomial(m), coeff.clone());
        }
    }

    /// The shift `Π`: `X^μ ↦ ξ^{μ_1} y^{(l-1)μ_1 − Σ_{k≥2} μ_k} X^{(μ_2,…,μ_l,μ_1)}`.
    fn shift(&self, v: &HModuleVector, inverse: bool) -> HModuleVector {
        let l = self.l as i64;
        v.map_terms(|k, c| {
            let mu = match k {
                HModuleKey::Monomial(mu) => mu,
                HModuleKey::Unit => unreachable!("unit key in the polynomial module"),
            };
            let (m, factor) = if !inverse {
                let first = mu[0] as i64;
                let rest: i64 = mu[1..].iter().map(|&e| e as i64).sum();
                let mut m = mu[1..].to_vec();
                m.push(mu[0]);
                (m, self.xi.upow(first) * self.y.upow((l - 1) * first - rest))
            } else {
                let last = *mu.last().unwrap() as i64;
                let rest: i64 = mu[..mu.len() - 1].iter().map(|&e| e as i64).sum();
                let mut m = vec![mu[mu.len() - 1]];
                m.extend_from_slice(&mu[..mu.len() - 1]);
                (m, self.xi.upow(-last) * self.y.upow(rest - (l - 1) * last))
            };
            Some((HModuleKey::Monomial(m), c * &factor))
        })
    }

    fn y_once(&self, j: usize, inverse: bool, mu: &[i32]) -> HModuleVector {
        let key = (j, inverse, mu.to_vec());
        if let Some(hit) = self.y_cache.read().unwrap().get(&key) {
            return hit.clone();
        }
        let mut scratch = WindowBudget::unbounded();
        let v = Self::monomial(mu.to_vec());
        let out = if j == 1 {
            if !inverse {
                let mut w = self.shift(&v, false);
                for i in (1..self.l).rev() {
                    w = self.act_t(i, &w, &mut scratch);
                }
                w
            } else {
                let mut w = v;
                for i in 1..self.l {
                    w = self.act_t_inv(i, &w, &mut scratch);
                }
                self.shift(&w, true)
            }
        } else {
            let i = j - 1;
            if !inverse {
                // Y_{i+1} = q² T_i^{-1} Y_i T_i^{-1}
                let w = self.act_t_inv(i, &v, &mut scratch);
                let w = self.act_y(i, 1, &w, &mut scratch);
                self.act_t_inv(i, &w, &mut scratch).scaled(&self.q2)
            } else {
                let w = self.act_t(i, &v, &mut scratch);
                let w = self.act_y(i, -1, &w, &mut scratch);
                self.act_t(i, &w, &mut scratch).scaled(&self.q2.upow(-1))
            }
        };
        self.y_cache.write().unwrap().insert(key, out.clone());
        out
    }
}

impl RightHeckeModule for PolynomialModule {
    fn l(&self) -> usize {
        self.l
    }
    fn q(&self) -> &Scalar {
        &self.q
    }
    fn x(&self) -> &Scalar {
        &self.x
    }
    fn y(&self) -> &Scalar {
        &self.y
    }
    fn window(&self) -> Option<i32> {
        Some(self.window)
    }

    fn descriptor(&self) -> ModuleDescriptor {
        ModuleDescriptor {
            version: 1,
            family: "polynomial".into(),
            l: self.l,
            q: self.q.clone(),
            x: self.x.clone(),
            y: self.y.clone(),
            window: Some(self.window),
            xi: Some(self.xi.clone()),
            a: None,
            b: None,
            corrupted_t: self.corrupted_t,
        }
    }

    fn act_x(&self, j: usize, e: i64, v: &HModuleVector, b: &mut WindowBudget) -> HModuleVector {
        let out = v.map_terms(|k, c| match k {
            HModuleKey::Monomial(mu) => {
                let mut m = mu.clone();
                m[j - 1] += e as i32;
                Some((HModuleKey::Monomial(m), c.clone()))
            }
            HModuleKey::Unit => unreachable!("unit key in the polynomial module"),
        });
        b.observe_vec(&out);
        out
    }

    fn act_t(&self, i: usize, v: &HModuleVector, _b: &mut WindowBudget) -> HModuleVector {
        let mut out = HModuleVector::zero();
        for (k, c) in v.iter() {
            match k {
                HModuleKey::Monomial(mu) => self.t_monomial(i, mu, c, &mut out),
                HModuleKey::Unit => unreachable!("unit key in the polynomial module"),
            }
        }
        out
    }

    fn act_y(&self, j: usize, e: i64, v: &HModuleVector, b: &mut WindowBudget) -> HModuleVector {
        let mut w = v.clone();
        for _ in 0..e.unsigned_abs() {
            w = w.map_linear(|k| match k {
                HModuleKey::Monomial(mu) => self.y_once(j, e < 0, mu),
                HModuleKey::Unit => unreachable!("unit key in the polynomial module"),
            });
        }
        b.observe_vec(&w);
        w
    }
}

/// Solve for the shift scale `ξ` from `X_0·Y_1 = x·Y_1·X_0` on the constant
/// monomial: with `ξ = 1` both sides are multiples of `X^{(1,…,1)}`, and the
/// left side is linear in `ξ`.
pub fn derive_shift_scale(l: usize, q: &Scalar, x: &Scalar, y: &Scalar) -> Scalar {
    let trial = Params { n: 0, l, q: q.clone(), d: Scalar::one(), x: x.clone(), y: y.clone(), mode: crate::params::ParamMode::HeckeOnly };
    let m = PolynomialModule::with_scale(&trial, i32::MAX, false, Scalar::one());
    let mut b = WindowBudget::unbounded();
    let one = PolynomialModule::monomial(vec![0; l]);
    let ones = HModuleKey::Monomial(vec![1; l]);
    let mut lhs = one.clone();
    for j in 1..=l {
        lhs = m.act_x(j, 1, &lhs, &mut b);
    }
    let lhs = m.act_y(1, 1, &lhs, &mut b);
    let mut rhs = m.act_y(1, 1, &one, &mut b);
    for j in 1..=l {
        rhs = m.act_x(j, 1, &rhs, &mut b);
    }
    let a = lhs.coeff(&ones);
    let c = rhs.coeff(&ones);
    (x * &c).checked_div(&a).expect("nonzero leading coefficient")
}
