//! The acyclicity criterion: the Taylor complex resolves S/I exactly
//! when H̃_p(D(G,<P)) vanishes for p ≥ depth(J(G)) − 1, over every
//! saturated set G and every P in the projection image.

use crate::error::Error;
use crate::field::Field;
use crate::homology::reduced_flag_homology_dims;
use crate::lattice::{saturated_sets, LcmLattice, SaturatedSet, SaturationMode};
use crate::model::{ExponentVector, GeneratorSet, LinearRealization};

/// Supplies depth(J(G)) for saturated sets G, per mode.
pub struct DepthOracle<'a> {
    pub mode: SaturationMode<'a>,
}

impl<'a> DepthOracle<'a> {
    pub fn monomial() -> Self {
        DepthOracle {
            mode: SaturationMode::Monomial,
        }
    }

    pub fn linear(real: &'a LinearRealization) -> Self {
        DepthOracle {
            mode: SaturationMode::Linear(real),
        }
    }

    pub fn table(entries: &'a [(Vec<usize>, u32)]) -> Self {
        DepthOracle {
            mode: SaturationMode::Table(entries),
        }
    }

    /// depth(J(G)) for a nonempty saturated set G.
    pub fn depth(&self, g: &SaturatedSet) -> Result<u32, Error> {
        match &self.mode {
            // Independent variables form a regular sequence.
            SaturationMode::Monomial => Ok(g.size() as u32),
            // An ideal generated by linear forms is generated by a basis
            // of their span: a regular sequence of length rank.
            SaturationMode::Linear(real) => Ok(real.rank_of(&g.indices()) as u32),
            SaturationMode::Table(entries) => {
                let key = g.indices();
                entries
                    .iter()
                    .find(|(idx, _)| {
                        let mut sorted = idx.clone();
                        sorted.sort_unstable();
                        sorted.dedup();
                        sorted == key
                    })
                    .map(|&(_, d)| d)
                    .ok_or_else(|| Error::IncompleteOracle(format!("{key:?}")))
            }
        }
    }
}

/// A pair the criterion failed on, lexicographically least in the scan
/// order (G by (size, indices), then P by (total degree, lex), then p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailWitness {
    pub g: Vec<usize>,
    pub p_val: ExponentVector,
    pub degree: i32,
    pub homology_dim: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FastPathHits {
    /// Pairs skipped by the coatomic bound depth(G) ≥ |support(P)|.
    pub coatomic: usize,
}

#[derive(Clone, Debug)]
pub struct AcyclicityCertificate {
    pub pass: bool,
    pub witness: Option<FailWitness>,
    /// Pairs whose homology was actually computed.
    pub checked_pairs: usize,
    pub fast_path_hits: FastPathHits,
}

/// Coatomic bound: D(G,<P) has at most |support(P)| coatoms, so its
/// reduced homology vanishes in degrees ≥ |support(P)| − 1. When the
/// depth window starts there or later the pair cannot fail.
pub fn fast_coatomic_bound(depth: u32, p_val: &ExponentVector) -> bool {
    depth as usize >= p_val.support().len()
}

/// Run the criterion over all saturated sets and projection shadows.
/// The fail witness is deterministic: the first failing (G, P, p) in
/// scan order, independent of fast paths (skips are conservative).
pub fn check<F: Field>(
    lat: &LcmLattice,
    oracle: &DepthOracle<'_>,
    field: &F,
    use_fast_paths: bool,
) -> Result<AcyclicityCertificate, Error> {
    let sets = saturated_sets(lat.gens(), &oracle.mode)?;
    let mut checked_pairs = 0usize;
    let mut hits = FastPathHits::default();
    for g in &sets {
        // G = ∅ is vacuous: K(∅) is the full simplex complex, acyclic.
        if g.is_empty_set() {
            continue;
        }
        let depth = oracle.depth(g)?;
        for p_val in lat.projection_image(g) {
            if use_fast_paths && fast_coatomic_bound(depth, &p_val) {
                hits.coatomic += 1;
                continue;
            }
            checked_pairs += 1;
            let sub = lat.strict_sublevel(g, &p_val)?;
            for (deg, dim) in reduced_flag_homology_dims(&sub, field) {
                if deg >= depth as i32 - 1 && dim > 0 {
                    return Ok(AcyclicityCertificate {
                        pass: false,
                        witness: Some(FailWitness {
                            g: g.indices(),
                            p_val,
                            degree: deg,
                            homology_dim: dim,
                        }),
                        checked_pairs,
                        fast_path_hits: hits,
                    });
                }
            }
        }
    }
    Ok(AcyclicityCertificate {
        pass: true,
        witness: None,
        checked_pairs,
        fast_path_hits: hits,
    })
}

/// Is every set of at most n realization rows linearly independent?
pub fn realization_is_generic(real: &LinearRealization) -> bool {
    let r = real.num_factors();
    let n = real.ambient_dim();
    let k = n.min(r);
    // Checking subsets of size exactly k covers all smaller subsets.
    subsets_exactly(r, k)
        .into_iter()
        .all(|s| real.rank_of(&s) == s.len())
}

fn subsets_exactly(r: usize, k: usize) -> Vec<Vec<usize>> {
    assert!(r < 31);
    (0u32..1 << r)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..r).filter(|&i| s >> i & 1 == 1).collect())
        .collect()
}

/// Generic reduction: when every ≤ n rows are independent, the criterion
/// collapses to H̃_p(D_{<P}) = 0 for p ≥ n − 1, over the full-rank P
/// only. Returns None (caller falls back to the full check) when
/// genericity does not hold.
pub fn generic_linear_reduction<F: Field>(
    lat: &LcmLattice,
    real: &LinearRealization,
    field: &F,
) -> Result<Option<AcyclicityCertificate>, Error> {
    if !realization_is_generic(real) {
        return Ok(None);
    }
    let n = real.ambient_dim();
    let mut checked_pairs = 0usize;
    for q in 1..lat.len() {
        let p_val = lat.element(q).clone();
        if real.rank_of(&p_val.support()) < n {
            continue;
        }
        checked_pairs += 1;
        let sub = lat.lower_interval(q)?;
        for (deg, dim) in reduced_flag_homology_dims(&sub, field) {
            if deg >= n as i32 - 1 && dim > 0 {
                return Ok(Some(AcyclicityCertificate {
                    pass: false,
                    witness: Some(FailWitness {
                        g: (0..real.num_factors()).collect(),
                        p_val,
                        degree: deg,
                        homology_dim: dim,
                    }),
                    checked_pairs,
                    fast_path_hits: FastPathHits::default(),
                }));
            }
        }
    }
    Ok(Some(AcyclicityCertificate {
        pass: true,
        witness: None,
        checked_pairs,
        fast_path_hits: FastPathHits::default(),
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquarefreeVerdict {
    Pass,
    Unknown,
}

/// Sufficient test for squarefree products of linear forms: pass when,
/// for every generator, no factor of the generator lies in the span of
/// the factors of the complementary generators. Unknown is not a
/// failure; the full check still applies.
pub fn sufficient_squarefree_test(
    gens: &GeneratorSet,
    real: &LinearRealization,
) -> SquarefreeVerdict {
    let r = gens.num_factors();
    for g in gens.gens() {
        if g.0.iter().any(|&e| e > 1) {
            return SquarefreeVerdict::Unknown;
        }
    }
    for g in gens.gens() {
        let own = g.support();
        let complement: Vec<usize> = (0..r)
            .filter(|z| gens.gens().iter().any(|h| h != g && h.0[*z] > 0))
            .filter(|z| !own.contains(z))
            .collect();
        for &z in &own {
            if real.in_span(&complement, z) {
                return SquarefreeVerdict::Unknown;
            }
        }
    }
    SquarefreeVerdict::Pass
}
