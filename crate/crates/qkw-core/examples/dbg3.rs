use qkw_core::circuit::COALITION_THETA;
use qkw_core::economy::EconomyParams;
use qkw_core::equilibrium::{pair_improvement_search, production_start, Pair};

fn main() {
    let params = EconomyParams::new(100.0, 0.9, [1.0, 4.0, 9.0]).unwrap();
    let init = production_start();
    for pair in [Pair::AliceBob, Pair::AliceCharlie, Pair::BobCharlie] {
        let rep = pair_improvement_search(pair, &params, 6, COALITION_THETA, &init).unwrap();
        println!("=== {} baseline {:?}", pair.name(), rep.baseline);
        println!("  improvements: {}", rep.improvements.len());
        for (pt, v) in rep.improvements.iter().take(8) {
            println!("   at (p,d1,d2)={:?} -> V={:?}", pt, v);
        }
        println!("  best: {:?}", rep.best);
    }
}
