//! Inhomogeneous T-Q relation, nested Bethe equations and their solution.

mod dual;
mod fit;
mod matching;
mod newton;
mod relation;
mod roots;
mod solve;

pub use dual::{Dual, Scalar};
pub use matching::{match_against_exact, LevelSummary, MatchOptions, MatchReport, MatchedLevel};
pub use newton::{NewtonOptions, NewtonRun};
pub use relation::{
    bae_residuals, energy_from_lambda, energy_from_roots, eval_lambda, max_relative_residual, ENERGY_IMAG_TOL,
};
pub use roots::{canonical_lambda, canonical_v, BetheRoots, RootRecord};
pub use solve::{
    dedupe, is_admissible, lambda_samples, solve_nested_bae, BaeSolution, FamilyStats, SeedStrategy, SolveReport,
    DEDUPE_TOL,
};

/// Newton refinement of a given configuration, keeping its root counts.
pub fn refine(roots: &BetheRoots, opts: &NewtonOptions) -> Option<(BetheRoots, f64)> {
    let k = relation::Coeffs::new(&roots.params, roots.sites);
    let z0: Vec<crate::params::C64> = roots.v.iter().chain(&roots.lam).copied().collect();
    let run = newton::newton(&z0, roots.m(), &k, opts)?;
    let out = BetheRoots::new(run.z[..roots.m()].to_vec(), run.z[roots.m()..].to_vec(), roots.params, roots.sites);
    Some((out.canonicalized(), run.residual))
}
