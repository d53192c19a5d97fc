//! Exact pmfs and the binomial-versus-Poisson comparison machinery.

mod bounds;
mod compare;
mod pmf;

pub use bounds::{depoissonization_check, paley_zygmund_bound, DepoissonizationCheck};
pub use compare::{compare_binomial_poisson, comparison_rows, ComparisonRow, PmfComparison};
pub use pmf::{
    binomial_pmf, ln_binomial_pmf, ln_multinomial_two_cell_pmf, ln_poisson_pmf, multinomial_two_cell_pmf,
    poisson_pmf,
};
