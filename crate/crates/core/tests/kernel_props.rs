use rand::Rng;
use symlift::kernel::{certify, parse_semipalindrome_product, rho_normal_form, verify_certificate};
use symlift::lift::{kernel_verdict, Route, Verdict};
use symlift::random::{random_generator_word, random_pure_word, random_rho_product, rng_from_seed};
use symlift::symaut::{eval_generator_word, outer_equal, GeneratorWord, Letter};
use symlift::words::GroupContext;

#[test]
fn rho_products_certify_and_lie_in_the_kernel() {
    let mut rng = rng_from_seed(401);
    for i in 0..500 {
        let n = 3 + i % 2;
        let w = random_rho_product(n, 6, 10, &mut rng);
        let v = kernel_verdict(&w, Route::Both).unwrap();
        assert_eq!(v.verdict, Verdict::In, "{w}");
        assert_eq!(v.agree, Some(true));
        let cert = certify(&w).unwrap_or_else(|| panic!("no certificate for {w}"));
        assert!(verify_certificate(&cert, &w).unwrap(), "{w}");
    }
}

/// `∏ v_k R(i_k) v_k^-1` with pure `v_k`: whenever the reflection part is
/// uniform, the input certifies and the certificate verifies.
#[test]
fn emitted_certificates_verify() {
    let mut rng = rng_from_seed(402);
    let (mut uniform, mut certified) = (0, 0);
    while uniform < 500 {
        let n = 3 + uniform % 2;
        let mut w = GeneratorWord::empty(n);
        for _ in 0..rng.gen_range(1..=4) {
            let v = random_pure_word(n, rng.gen_range(0..=10), &mut rng);
            let r = GeneratorWord::new(n, vec![Letter::R(rng.gen_range(1..=n))]).unwrap();
            w = w.concat(&r.conjugated_by(&v));
        }
        if rho_normal_form(&w).uniform_rho().is_none() {
            continue;
        }
        uniform += 1;
        if let Some(c) = certify(&w) {
            certified += 1;
            assert!(verify_certificate(&c, &w).unwrap(), "{w}");
        }
    }
    assert_eq!(certified, uniform);
}

#[test]
fn odd_words_never_parse() {
    let mut rng = rng_from_seed(403);
    for _ in 0..2_000 {
        let len = 2 * rng.gen_range(0..8) + 1;
        let w = random_pure_word(3 + rng.gen_range(0..2), len, &mut rng);
        assert!(parse_semipalindrome_product(&w).unwrap().is_none(), "{w}");
    }
}

#[test]
fn rho_normal_form_recomposes_outer_equal() {
    let mut rng = rng_from_seed(404);
    for i in 0..1_000 {
        let n = 3 + i % 2;
        let ctx = GroupContext::free(n).unwrap();
        let w = random_generator_word(n, rng.gen_range(0..=20), &mut rng);
        let nf = rho_normal_form(&w);
        let a = eval_generator_word(&nf.recompose(), ctx).unwrap();
        let b = eval_generator_word(&w, ctx).unwrap();
        assert!(outer_equal(&a, &b).unwrap(), "{w}");
    }
}
