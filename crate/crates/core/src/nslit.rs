//! n-slit experiments as families of maps `φ_α`, one per subset of slits,
//! and their Sorkin interference terms `η_α`.

use std::collections::BTreeMap;

use gpm_exact::rat::{self, dot, ints, Rat};
use num_traits::{One, Zero};

use crate::error::{CoreError, Result};
use crate::maps::{MapMatrix, PositiveMap};
use crate::matrix::Mat;
use crate::quantum::{self, CMat};
use crate::scalar::TOL;
use crate::space::{AouSpace, Element};

/// Largest slit count; maps are stored for all `2ⁿ` subsets.
pub const MAX_SLITS: usize = 6;

/// `{1,3}`-style label of a subset bitmask (slits numbered from 1).
pub fn subset_label(mask: usize) -> String {
    let parts: Vec<String> = (0..usize::BITS as usize)
        .filter(|k| mask >> k & 1 == 1)
        .map(|k| (k + 1).to_string())
        .collect();
    format!("{{{}}}", parts.join(","))
}

/// Inverse of [`subset_label`].
pub fn parse_subset(label: &str) -> Option<usize> {
    let inner = label.trim().strip_prefix('{')?.strip_suffix('}')?;
    if inner.trim().is_empty() {
        return Some(0);
    }
    inner.split(',').try_fold(0usize, |m, p| {
        let k: usize = p.trim().parse().ok()?;
        (1..=MAX_SLITS).contains(&k).then_some(m | 1 << (k - 1))
    })
}

#[derive(Clone, Debug)]
pub struct SlitModel {
    pub space: AouSpace,
    pub slits: usize,
    /// `maps[α]` for every bitmask `α`; `maps[0]` is the zero map.
    pub maps: Vec<PositiveMap>,
}

impl SlitModel {
    /// Checks additivity of intensities `φ_α(e) = Σ_{k∈α} φ_k(e)` and that
    /// `φ_N(e)` is an effect.
    pub fn new(space: AouSpace, slits: usize, maps: Vec<PositiveMap>) -> Result<Self> {
        if slits == 0 || slits > MAX_SLITS {
            return Err(CoreError::InvalidInput(format!("slit count must be 1..={MAX_SLITS}")));
        }
        if maps.len() != 1 << slits {
            return Err(CoreError::InvalidInput(format!(
                "expected {} maps, got {}",
                1 << slits,
                maps.len()
            )));
        }
        let maps: Vec<PositiveMap> = maps.iter().map(|m| m.coerce(&space)).collect::<Result<_>>()?;
        let model = SlitModel { space, slits, maps };
        model.check_intensities()?;
        Ok(model)
    }

    pub fn full(&self) -> usize {
        (1 << self.slits) - 1
    }

    pub fn map(&self, mask: usize) -> &PositiveMap {
        &self.maps[mask]
    }

    pub fn intensity(&self, mask: usize) -> Element {
        self.maps[mask].apply(&self.space.unit())
    }

    fn check_intensities(&self) -> Result<()> {
        let near = |a: &Element, b: &Element| match (a, b) {
            (Element::Exact(x), Element::Exact(y)) => x == y,
            _ => crate::scalar::vnear(&a.to_f64(), &b.to_f64()),
        };
        if !near(&self.intensity(0), &self.space.zero()) {
            return Err(CoreError::InvalidInput("the empty subset must map to zero".into()));
        }
        for mask in 1..=self.full() {
            let mut sum = self.space.zero();
            for k in (0..self.slits).filter(|k| mask >> k & 1 == 1) {
                sum = self.space.add(&sum, &self.intensity(1 << k))?;
            }
            if !near(&sum, &self.intensity(mask)) {
                return Err(CoreError::InvalidInput(format!(
                    "intensity of {} is not the sum over its slits",
                    subset_label(mask)
                )));
            }
        }
        if !self.space.is_effect(&self.intensity(self.full()))?.holds {
            return Err(CoreError::InvalidInput("total intensity is not an effect".into()));
        }
        Ok(())
    }
}

/// Interference terms with `Σ_{β⊆α} η_β = φ_α`.
#[derive(Clone, Debug)]
pub struct InterferenceDecomposition {
    pub eta: Vec<PositiveMap>,
    /// The reconstruction identity, re-checked after inversion.
    pub reconstructs: bool,
}

impl InterferenceDecomposition {
    /// Largest absolute matrix entry of `η_α`.
    pub fn norm(&self, mask: usize) -> f64 {
        self.eta[mask].max_abs()
    }

    pub fn is_zero(&self, mask: usize, tol: f64) -> bool {
        match &self.eta[mask].matrix {
            MapMatrix::Exact(m) => m.entries().iter().all(Zero::is_zero),
            MapMatrix::Float(m) => m.max_abs() <= tol,
        }
    }

    /// Largest `|α|` with `η_α ≠ 0`.
    pub fn max_order(&self, tol: f64) -> usize {
        (1..self.eta.len())
            .filter(|&m| !self.is_zero(m, tol))
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Largest norm over subsets of a given size.
    pub fn order_norm(&self, order: usize) -> f64 {
        (1..self.eta.len())
            .filter(|m| m.count_ones() as usize == order)
            .map(|m| self.norm(m))
            .fold(0.0, f64::max)
    }
}

fn submasks(mask: usize) -> impl Iterator<Item = usize> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = (cur != 0).then(|| (cur - 1) & mask);
        Some(cur)
    })
}

/// Möbius inversion `η_α = Σ_{β⊆α} (−1)^{|α∖β|} φ_β`.
pub fn sorkin_decomposition(model: &SlitModel) -> InterferenceDecomposition {
    let zero = PositiveMap::zero(&model.space);
    let eta: Vec<PositiveMap> = (0..=model.full())
        .map(|alpha| {
            submasks(alpha).fold(zero.clone(), |acc, beta| {
                if (alpha ^ beta).count_ones() % 2 == 0 {
                    add(&acc, &model.maps[beta])
                } else {
                    acc.sub(&model.maps[beta])
                }
            })
        })
        .collect();
    let reconstructs = (0..=model.full()).all(|alpha| {
        let sum = submasks(alpha).fold(zero.clone(), |acc, beta| add(&acc, &eta[beta]));
        sum.near(&model.maps[alpha])
    });
    InterferenceDecomposition { eta, reconstructs }
}

fn add(a: &PositiveMap, b: &PositiveMap) -> PositiveMap {
    let matrix = match (&a.matrix, &b.matrix) {
        (MapMatrix::Exact(x), MapMatrix::Exact(y)) => MapMatrix::Exact(x.add(y)),
        _ => MapMatrix::Float(a.to_f64().add(&b.to_f64())),
    };
    PositiveMap { matrix, kraus: None }
}

fn subset_sum(ops: &[CMat], mask: usize) -> CMat {
    let n = ops[0].nrows();
    ops.iter()
        .enumerate()
        .filter(|(k, _)| mask >> k & 1 == 1)
        .fold(CMat::zeros(n, n), |acc, (_, p)| acc + p)
}

fn check_bounded(ops: &[CMat]) -> Result<usize> {
    let n = ops.first().ok_or_else(|| CoreError::InvalidInput("no slits".into()))?.nrows();
    if ops.iter().any(|p| p.nrows() != n || p.ncols() != n) {
        return Err(CoreError::InvalidInput("operators differ in size".into()));
    }
    let rest = CMat::identity(n, n) - subset_sum(ops, (1 << ops.len()) - 1);
    if quantum::min_eigenvalue(&rest) < -TOL {
        return Err(CoreError::InvalidInput("operators sum beyond the identity".into()));
    }
    Ok(n)
}

/// `φ_α: X ↦ Π_α X Π_α` with `Π_α = Σ_{k∈α} Π_k`.
pub fn quantum_slits(projectors: &[CMat]) -> Result<SlitModel> {
    let n = check_bounded(projectors)?;
    if let Some(k) = projectors.iter().position(|p| !quantum::is_projector(p)) {
        return Err(CoreError::InvalidInput(format!("operator {} is not a projector", k + 1)));
    }
    let maps = (0..1usize << projectors.len())
        .map(|m| PositiveMap::conjugation(&subset_sum(projectors, m)))
        .collect();
    SlitModel::new(AouSpace::quantum(n)?, projectors.len(), maps)
}

/// `φ_α: X ↦ √A_α X √A_α` with `A_α = Σ_{k∈α} A_k`.
pub fn sqrt_instrument_slits(operators: &[CMat]) -> Result<SlitModel> {
    let n = check_bounded(operators)?;
    if let Some(k) = operators.iter().position(|a| quantum::min_eigenvalue(a) < -TOL) {
        return Err(CoreError::InvalidInput(format!("operator {} is not positive", k + 1)));
    }
    let maps = (0..1usize << operators.len())
        .map(|m| PositiveMap::conjugation(&quantum::sqrt_psd(&subset_sum(operators, m))))
        .collect();
    SlitModel::new(AouSpace::quantum(n)?, operators.len(), maps)
}

/// The triple-slit cone on `ℝ⁴` generated by the basis `a₁…a₄` and
/// `a₅ = a₁ + a₂ + a₃ − a₄`, with `e = a₁ + a₂ + a₃ = a₄ + a₅`.
pub fn trislit_space() -> Result<AouSpace> {
    let mut generators: Vec<Vec<Rat>> = (0..4).map(|k| rat::unit(4, k)).collect();
    generators.push(ints(&[1, 1, 1, -1]));
    AouSpace::finite_cone(generators, ints(&[1, 1, 1, 0]))
}

pub fn trislit_generator(k: usize) -> Vec<Rat> {
    match k {
        1..=4 => rat::unit(4, k - 1),
        5 => ints(&[1, 1, 1, -1]),
        _ => panic!("the triple-slit cone has generators a1..a5"),
    }
}

/// A state `ω^α_k` for every proper nonempty subset `α` and slit `k ∈ α`.
pub type StateChoices = BTreeMap<(usize, usize), Vec<Rat>>;

/// `φ_α = Σ_{k∈α} a_k ω^α_k` for proper subsets and `φ_N = id`.
pub fn trislit_toy_model(choices: &StateChoices) -> Result<SlitModel> {
    let space = trislit_space()?;
    let c = space.poly().expect("finite cone");
    let mut maps = vec![PositiveMap::exact(Mat::zeros(4, 4))];
    for alpha in 1..7usize {
        let mut m = Mat::zeros(4, 4);
        for k in (0..3).filter(|k| alpha >> k & 1 == 1) {
            let w = choices.get(&(alpha, k)).ok_or_else(|| {
                CoreError::InvalidInput(format!("no state for slit {} in {}", k + 1, subset_label(alpha)))
            })?;
            let a = trislit_generator(k + 1);
            if c.state_violation(w).is_some() || dot(w, &a) != Rat::one() {
                return Err(CoreError::InvalidInput(format!(
                    "{} is not a state with value 1 on a{}",
                    rat::fmt_vec(w),
                    k + 1
                )));
            }
            m = m.add(&Mat::outer(&a, w));
        }
        maps.push(PositiveMap::exact(m));
    }
    maps.push(PositiveMap::exact(Mat::identity(4)));
    SlitModel::new(space, 3, maps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChoiceObjective {
    VanishingPairwise,
    Commutativity,
    Both,
}

fn meets(model: &SlitModel, objective: ChoiceObjective) -> bool {
    let pairwise = || {
        let d = sorkin_decomposition(model);
        [0b011, 0b101, 0b110].iter().all(|&m| d.is_zero(m, 0.0))
    };
    let commute = || {
        (1..=model.full()).all(|a| {
            (a + 1..=model.full()).all(|b| model.maps[a].compose(&model.maps[b]) == model.maps[b].compose(&model.maps[a]))
        })
    };
    match objective {
        ChoiceObjective::VanishingPairwise => pairwise(),
        ChoiceObjective::Commutativity => commute(),
        ChoiceObjective::Both => pairwise() && commute(),
    }
}

/// Exhaustive search over assignments drawn from the state vertices with
/// `ω(a_k) = 1`. Consistent assignments (`ω^α_k` independent of `α`) are
/// tried first.
pub fn find_state_choices(objective: ChoiceObjective) -> Result<Option<StateChoices>> {
    let space = trislit_space()?;
    let c = space.poly().expect("finite cone");
    let candidates: Vec<Vec<Vec<Rat>>> = (1..=3)
        .map(|k| {
            let a = trislit_generator(k);
            c.states().iter().filter(|w| dot(w, &a) == Rat::one()).cloned().collect()
        })
        .collect();
    let slots: Vec<(usize, usize)> = (1..7usize)
        .flat_map(|alpha| (0..3).filter(move |k| alpha >> k & 1 == 1).map(move |k| (alpha, k)))
        .collect();
    let build = |pick: &dyn Fn(usize, usize) -> usize| -> StateChoices {
        slots.iter().map(|&(alpha, k)| ((alpha, k), candidates[k][pick(alpha, k)].clone())).collect()
    };
    let try_choice = |choices: StateChoices| -> Result<Option<StateChoices>> {
        let model = trislit_toy_model(&choices)?;
        Ok(meets(&model, objective).then_some(choices))
    };
    // consistent assignments
    let sizes: Vec<usize> = candidates.iter().map(Vec::len).collect();
    for idx in product(&sizes) {
        if let Some(found) = try_choice(build(&|_, k| idx[k]))? {
            return Ok(Some(found));
        }
    }
    // all assignments
    let slot_sizes: Vec<usize> = slots.iter().map(|&(_, k)| sizes[k]).collect();
    for idx in product(&slot_sizes) {
        let choices: StateChoices = slots
            .iter()
            .zip(&idx)
            .map(|(&(alpha, k), &i)| ((alpha, k), candidates[k][i].clone()))
            .collect();
        if let Some(found) = try_choice(choices)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// All index tuples `i` with `i[k] < sizes[k]`, in lexicographic order.
fn product(sizes: &[usize]) -> Vec<Vec<usize>> {
    sizes.iter().fold(vec![vec![]], |acc, &n| {
        acc.into_iter()
            .flat_map(|p| {
                (0..n).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect()
    })
}

/// The `a₄`-coordinate of `η_N` applied to each basis vector; the toy
/// cone has nonvanishing triple-slit interference iff one is nonzero.
pub fn trislit_a4_witness(decomposition: &InterferenceDecomposition) -> Option<(usize, Rat)> {
    let m = decomposition.eta[7].as_exact()?;
    (0..4).map(|j| (j, m[(3, j)].clone())).find(|(_, v)| !v.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_labels_round_trip() {
        assert_eq!(subset_label(0b101), "{1,3}");
        assert_eq!(parse_subset("{1,3}"), Some(0b101));
        assert_eq!(parse_subset("{}"), Some(0));
        assert_eq!(parse_subset("{9}"), None);
    }

    #[test]
    fn basis_projectors_have_no_third_order_interference() {
        let ps: Vec<CMat> = (0..3).map(|k| {
            let mut d = vec![0.0; 3];
            d[k] = 1.0;
            quantum::diag(&d)
        }).collect();
        let d = sorkin_decomposition(&quantum_slits(&ps).unwrap());
        assert!(d.reconstructs);
        assert!(d.norm(0b111) < 1e-12);
        assert!(d.norm(0b011) > 0.1);
        assert_eq!(d.max_order(1e-12), 2);
    }

    #[test]
    fn single_slit_interference_is_the_map() {
        let m = quantum_slits(&[quantum::diag(&[1.0, 0.0])]).unwrap();
        let d = sorkin_decomposition(&m);
        assert!(d.eta[1].near(&m.maps[1]));
    }

    #[test]
    fn consistent_choice_kills_pairwise_terms_and_commutes() {
        let found = find_state_choices(ChoiceObjective::Both).unwrap().expect("a choice exists");
        let model = trislit_toy_model(&found).unwrap();
        let d = sorkin_decomposition(&model);
        assert!(d.reconstructs);
        assert_eq!(d.max_order(0.0), 3);
        let (_, v) = trislit_a4_witness(&d).unwrap();
        assert!(!v.is_zero());
    }
}
