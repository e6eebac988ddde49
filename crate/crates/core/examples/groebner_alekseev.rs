//! Both sides of the nonlinear variation-of-constants formula for the three
//! shipped scalar problems.

use vpsplit::analysis::{groebner_alekseev_residual, LinearForced, Logistic, ScalarProblem, Unperturbed};

fn show(problem: &dyn ScalarProblem) -> vpsplit::Result<()> {
    println!("{}", problem.name());
    for t in [0.5, 1.0, 2.5, 5.0] {
        let r = groebner_alekseev_residual(problem, t)?;
        println!(
            "  t = {t:<4} f(t) = {:.12}  formula = {:.12}  residual = {:.1e}",
            r.direct, r.formula, r.residual
        );
    }
    Ok(())
}

fn main() -> vpsplit::Result<()> {
    show(&Unperturbed::default())?;
    show(&Logistic)?;
    show(&LinearForced::default())
}
