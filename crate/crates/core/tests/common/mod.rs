#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use kywhy::syntax::Formula;

/// Which knowing-why operator random formulas may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Ky,
    KyR,
}

/// Random announcement-free formula over `atoms` and agent `a` with depth
/// at most `depth`.
pub fn random_formula(rng: &mut ChaCha8Rng, depth: usize, atoms: &[&str], flavor: Flavor) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return Formula::atom(atoms[rng.gen_range(0..atoms.len())]);
    }
    let sub = |rng: &mut ChaCha8Rng| random_formula(rng, depth - 1, atoms, flavor);
    match rng.gen_range(0..6) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::implies(sub(rng), sub(rng)),
        3 => Formula::k("a", sub(rng)),
        _ => match flavor {
            Flavor::Ky => Formula::ky("a", sub(rng)),
            Flavor::KyR => Formula::kyr("a", sub(rng), sub(rng)),
        },
    }
}

/// Random formula that may also contain announcements.
pub fn random_dynamic_formula(rng: &mut ChaCha8Rng, depth: usize, atoms: &[&str], flavor: Flavor) -> Formula {
    if depth > 0 && rng.gen_bool(0.3) {
        let ann = random_formula(rng, depth - 1, atoms, flavor);
        let body = random_dynamic_formula(rng, depth - 1, atoms, flavor);
        return Formula::announce(ann, body);
    }
    random_formula(rng, depth, atoms, flavor)
}
