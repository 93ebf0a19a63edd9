use operads::koszul::*;
use operads::presentations::{builtin, render};

fn main() {
    for (name, target) in [("Com", "Lie"), ("Lie", "Com"), ("As", "As"), ("PreLie", "Perm"), ("Leib", "Zinb"), ("Zinb", "Leib"), ("Perm", "PreLie")] {
        let p = builtin(name).unwrap();
        let d = koszul_dual(&p).unwrap();
        let t = builtin(target).unwrap();
        // canonical name map: single generator cases index-aligned
        let gm = GenMap::identity(&d);
        let iso_canonical = presentations_isomorphic(&d, &t, &gm).unwrap_or(false);
        let iso_found = find_isomorphism(&d, &t).unwrap();
        println!("dual({name}) vs {target}: canonical={iso_canonical} search={}", iso_found.is_some());
        if name == "PreLie" {
            println!("--- dual(PreLie):\n{}", render(&d));
        }
    }
    for name in operads::presentations::builtin_names() {
        let p = builtin(name).unwrap();
        let rep = verify_dual_involution(&p).unwrap();
        println!("{name} involution+ranks: {}", rep.passed());
    }
}
