//! The Scarf subcomplex (subsets with singleton fibers) and the §4
//! coincidence and shape criteria.

use crate::error::Error;
use crate::field::Field;
use crate::homology::homology;
use crate::lattice::LcmLattice;
use crate::model::GeneratorSet;
use crate::taylor::fiber_complex;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScarfReport {
    /// Scarf basis masks per degree |σ| (degree 0 holds the empty set).
    pub scarf_basis: Vec<Vec<u32>>,
    pub is_generic: bool,
    /// Prop "BPS": every fiber is a singleton or its complex is exact.
    pub coincides: bool,
    /// Every fiber contains the intersection of all its members
    /// (equivalently, has a unique minimum — the fiber is Boolean).
    pub all_fibers_boolean: bool,
    /// Every fiber is closed under pairwise intersection.
    pub intersection_condition: bool,
}

impl ScarfReport {
    pub fn scarf_sizes(&self) -> Vec<usize> {
        self.scarf_basis.iter().map(|d| d.len()).collect()
    }
}

/// All subsets σ with |B(Q_σ)| = 1, grouped by |σ|.
pub fn scarf_complex(lat: &LcmLattice) -> Result<Vec<Vec<u32>>, Error> {
    let m = lat.gens().num_gens();
    let mut by_degree: Vec<Vec<u32>> = vec![Vec::new(); m + 1];
    for q in 0..lat.len() {
        let fiber = lat.fiber(q)?;
        if fiber.masks.len() == 1 {
            let mask = fiber.masks[0];
            by_degree[mask.count_ones() as usize].push(mask);
        }
    }
    for d in &mut by_degree {
        d.sort_unstable();
    }
    while by_degree.len() > 1 && by_degree.last().unwrap().is_empty() {
        by_degree.pop();
    }
    Ok(by_degree)
}

/// Prop "BPS": the minimal resolution coincides with the Scarf complex
/// iff every fiber is a singleton or exact.
pub fn coincidence_test<F: Field>(lat: &LcmLattice, field: &F) -> Result<bool, Error> {
    for q in 0..lat.len() {
        let fiber = lat.fiber(q)?;
        if fiber.masks.len() == 1 {
            continue;
        }
        let fc = fiber_complex(lat, q, field)?;
        if !homology(&fc.cc).is_trivial() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Genericity in the BPS sense: no factor appears with the same nonzero
/// exponent in two distinct generators.
pub fn genericity_test(gens: &GeneratorSet) -> bool {
    let m = gens.num_gens();
    let r = gens.num_factors();
    for l in 0..r {
        for i in 0..m {
            for j in i + 1..m {
                let a = gens.gens()[i].0[l];
                let b = gens.gens()[j].0[l];
                if a == b && a > 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// (every fiber Boolean, every fiber intersection-closed).
pub fn shape_tests(lat: &LcmLattice) -> Result<(bool, bool), Error> {
    let mut all_boolean = true;
    let mut intersection = true;
    for q in 0..lat.len() {
        let fiber = lat.fiber(q)?;
        let masks = &fiber.masks;
        let meet = masks.iter().fold(u32::MAX, |acc, &s| acc & s);
        if !masks.contains(&meet) {
            all_boolean = false;
        }
        'outer: for (i, &a) in masks.iter().enumerate() {
            for &b in &masks[i + 1..] {
                if !masks.contains(&(a & b)) {
                    intersection = false;
                    break 'outer;
                }
            }
        }
    }
    Ok((all_boolean, intersection))
}

/// Minimal elements (under inclusion) of the fiber of a lattice element.
pub fn fiber_minimal_elements(lat: &LcmLattice, q: usize) -> Result<Vec<u32>, Error> {
    let masks = lat.fiber(q)?.masks;
    Ok(masks
        .iter()
        .copied()
        .filter(|&a| !masks.iter().any(|&b| b != a && b & a == b))
        .collect())
}

pub fn scarf_report<F: Field>(lat: &LcmLattice, field: &F) -> Result<ScarfReport, Error> {
    let (all_fibers_boolean, intersection_condition) = shape_tests(lat)?;
    Ok(ScarfReport {
        scarf_basis: scarf_complex(lat)?,
        is_generic: genericity_test(lat.gens()),
        coincides: coincidence_test(lat, field)?,
        all_fibers_boolean,
        intersection_condition,
    })
}
