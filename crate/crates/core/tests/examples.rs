#![allow(dead_code)]

mod tomograms {
    include!("../examples/tomograms.rs");

    #[test]
    fn closed_form_matches_radon() {
        assert!(run_example().unwrap() < 1e-8);
    }
}

mod sign_binned {
    include!("../examples/sign_binned.rs");

    #[test]
    fn probabilities_stay_below_half() {
        assert!(run_example().unwrap() <= 0.5 + 1e-9);
    }
}

mod pseudospin {
    include!("../examples/pseudospin.rs");

    #[test]
    fn maxima_grow_with_squeezing() {
        let m = run_example().unwrap();
        assert!(m[0] < m[1] && m[1] < m[2]);
        assert!(m[3] > 2.0);
    }
}

mod optimize {
    include!("../examples/optimize.rs");

    #[test]
    fn only_the_toy_correlation_violates() {
        let v = run_example().unwrap();
        assert!((v[0] - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-6);
        assert!(v[1..].iter().all(|&b| b <= 2.0 + 1e-6));
    }
}

mod monte_carlo {
    include!("../examples/monte_carlo.rs");

    #[test]
    fn frequencies_agree() {
        assert!(run_example().unwrap() < 4.0);
    }
}

mod reconstruction {
    include!("../examples/reconstruction.rs");

    #[test]
    fn recovers_targets() {
        let [w00, p00, p11] = run_example().unwrap();
        assert!((w00 * std::f64::consts::PI - 1.0).abs() < 0.01);
        assert!((p00 - 1.0).abs() < 0.02);
        assert!((p11 - 1.0).abs() < 0.05);
    }
}

mod pair_coherent_integral {
    include!("../examples/pair_coherent_integral.rs");

    #[test]
    fn routes_agree() {
        assert!(run_example().unwrap() < 1e-8);
    }
}

mod figures {
    include!("../examples/figures.rs");

    #[test]
    fn writes_all_datasets() {
        let dir = tempfile::tempdir().unwrap();
        let files = run_example(dir.path()).unwrap();
        let names: Vec<String> = files
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        for want in [
            "fig1a.csv",
            "fig1b.csv",
            "fig2a.csv",
            "fig2b.csv",
            "fig3a.csv",
            "fig3b.csv",
            "manifest.json",
        ] {
            assert!(
                names.iter().any(|n| n == want),
                "{want} missing from {names:?}"
            );
        }
    }
}
