use dioph_core::exact::*;
use dioph_core::weights::Weights;
use dioph_core::dirichlet::*;
use num_traits::Signed;

fn rat(n: i64, d: i64) -> Rational { rational_from_i64(n, d) }

#[test]
fn dbg_fib() {
    let s = PlaceSet::real_only();
    let w = Weights::balanced(1, 1, &s);
    let phi = Real::Rat(rat(1, 2))
        .add(&Real::sqrt_rational(&rat(5, 1)).unwrap().mul_rational(&rat(1, 2)))
        .unwrap();
    let alpha = SMatrix::new(1, 1, vec![vec![SNumber::real_only(phi.clone())]]).unwrap();
    let e = epsilon_star(&alpha, &Int::from(34), &w, &s, &SolverOptions::default()).unwrap();
    let iv = e.exact.to_interval(40);
    eprintln!("eps*(34) in [{}, {}]", iv.lo.to_decimal_string(), iv.hi.to_decimal_string());
    eprintln!("witness: {:?}", e.witness);
    let phi_iv = phi.to_interval(128);
    let hi = phi_iv.hi.to_rational() * rat(34, 1) - rat(55, 1);
    eprintln!("hi = {:?} (approx {})", hi.abs().to_string(), (hi.abs() * rat(100000,1)).to_integer());
}
