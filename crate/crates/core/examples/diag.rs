use gkz_core::exactla::*;
use gkz_core::series::*;
fn main() {
    let a = ConfigMatrix::from_i64(&[&[1, 2, 3]]).unwrap();
    let w = i64_to_int_vec(&[0, 0, 1]);
    let beta = generic_parameter_sampler(&a, 8, 1002);
    let exps = exponents_for_weight(&a, &beta, &w, 64).unwrap();
    for e in &exps {
        println!("exponent v = {:?} origin sigma = {:?} k = {:?}", e.v, e.origin.as_ref().map(|o| o.sigma.indices().to_vec()), e.origin.as_ref().map(|o| o.k.clone()));
        let phi = phi_v(&a, e, Truncation::new(12, 12)).unwrap();
        for (key, _) in phi.series.terms.iter() {
            let m: Int = w.iter().zip(key).map(|(wi, &k)| wi * Int::from(k)).sum();
            if m < Int::from(0) { println!("  negative layer {m} at key {key:?}"); }
        }
    }
}
