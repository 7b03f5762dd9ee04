use symlift::braid::{artin_action, eta_image, BraidWord};
use symlift::random::{random_braid, rng_from_seed};

fn b(s: &str, n: usize) -> BraidWord {
    BraidWord::parse(s, n).unwrap()
}

#[test]
fn braid_relations_hold_exhaustively() {
    for n in 2..=5 {
        for i in 1..n {
            for j in 1..n {
                let (si, sj) = (format!("s{i}"), format!("s{j}"));
                if j == i + 1 {
                    let lhs = artin_action(&b(&format!("{si} {sj} {si}"), n));
                    let rhs = artin_action(&b(&format!("{sj} {si} {sj}"), n));
                    assert_eq!(lhs, rhs, "n={n} i={i}");
                }
                if i.abs_diff(j) >= 2 {
                    let lhs = artin_action(&b(&format!("{si} {sj}"), n));
                    let rhs = artin_action(&b(&format!("{sj} {si}"), n));
                    assert_eq!(lhs, rhs, "n={n} i={i} j={j}");
                }
            }
            assert!(artin_action(&b(&format!("s{i} s{i}^-1"), n)).is_identity());
        }
    }
}

#[test]
fn eta_is_a_homomorphism() {
    let mut rng = rng_from_seed(601);
    for t in 0..2_000 {
        let n = 2 + t % 4;
        let k = 2 + (t % 3) as u32;
        let x = random_braid(n, 6, &mut rng);
        let y = random_braid(n, 6, &mut rng);
        let xy = x.concat(&y).unwrap();
        let lhs = eta_image(&xy, k).unwrap();
        let rhs = eta_image(&x, k).unwrap().compose(&eta_image(&y, k).unwrap()).unwrap();
        assert_eq!(lhs, rhs, "{x} | {y} mod {k}");
        let a = artin_action(&xy);
        assert_eq!(a, artin_action(&x).compose(&artin_action(&y)).unwrap());
    }
}
