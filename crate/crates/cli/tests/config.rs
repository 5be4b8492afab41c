use wtgep::dwt::{Basis, Extension};
use wtgep_cli::output::fmt_sig;
use wtgep_cli::{resolve, BasisChoice, Overrides};

fn table(s: &str) -> toml::Table {
    s.parse().unwrap()
}

#[test]
fn defaults_without_file_or_flags() {
    let r = resolve(None, &Overrides::default()).unwrap();
    assert_eq!(r.forecast, wtgep::forecast::ForecastConfig::default());
    assert_eq!(r.column, None);
}

#[test]
fn flags_beat_file_beat_defaults() {
    let file = table(
        r#"
        column = "precip_mm"
        basis = "sym8"
        levels = 5
        train_fraction = 0.8
        [evolution]
        population_size = 50
        max_generations = 300
        [evolution.layout]
        genes = 3
        "#,
    );
    let flags = Overrides { population: Some(30), seed: Some(9), ..Overrides::default() };
    let r = resolve(Some(file), &flags).unwrap();
    let f = &r.forecast;
    assert_eq!(r.column.as_deref(), Some("precip_mm"));
    assert_eq!((f.basis, f.levels, f.train_fraction), (Some(Basis::Sym8), 5, 0.8));
    assert_eq!(f.evolution.population_size, 30);
    assert_eq!(f.evolution.max_generations, 300);
    assert_eq!(f.evolution.rng_seed, 9);
    assert_eq!(f.evolution.layout.genes, 3);
    assert_eq!(f.evolution.layout.head_len, 8);
}

#[test]
fn basis_none_implies_zero_levels() {
    let flags = Overrides { basis: Some(BasisChoice::None), genes: Some(1), ..Overrides::default() };
    let r = resolve(None, &flags).unwrap();
    assert_eq!((r.forecast.basis, r.forecast.levels), (None, 0));
    assert_eq!(r.forecast.method_label(), "GEP (baseline)");

    let r = resolve(Some(table("basis = \"none\"")), &Overrides::default()).unwrap();
    assert_eq!(r.forecast.levels, 0);

    let flags = Overrides { basis: Some(BasisChoice::None), levels: Some(3), ..Overrides::default() };
    assert!(resolve(None, &flags).is_err());
}

#[test]
fn flag_switches() {
    let flags = Overrides {
        strict_causal: true,
        no_constants: true,
        extension: Some(Extension::Periodization),
        ..Overrides::default()
    };
    let f = resolve(None, &flags).unwrap().forecast;
    assert!(f.strict_causal);
    assert!(!f.evolution.layout.constants);
    assert_eq!(f.extension, Extension::Periodization);
}

#[test]
fn rejects_bad_files() {
    for bad in ["levels = \"four\"", "basis = \"db4\"", "popsize = 3", "[evolution]\npop = 3", "column = 3"] {
        let err = resolve(Some(table(bad)), &Overrides::default()).unwrap_err();
        assert_eq!(err.kind(), "config", "{bad}: {err}");
    }
    let flags = Overrides { train_fraction: Some(1.0), ..Overrides::default() };
    assert!(resolve(None, &flags).is_err());
}

#[test]
fn basis_choice_text() {
    assert_eq!("coif5".parse::<BasisChoice>().unwrap(), BasisChoice::Wavelet(Basis::Coif5));
    assert_eq!("None".parse::<BasisChoice>().unwrap(), BasisChoice::None);
    assert!("db4".parse::<BasisChoice>().is_err());
    assert_eq!(BasisChoice::Wavelet(Basis::Db10).to_string(), "db10");
}

#[test]
fn seventeen_significant_digits() {
    assert_eq!(fmt_sig(634.828125), "634.82812500000000");
    assert_eq!(fmt_sig(0.1), "0.10000000000000001");
    assert_eq!(fmt_sig(-2.5), "-2.5000000000000000");
    assert_eq!(fmt_sig(0.0), "0");
    assert_eq!(fmt_sig(1e-9), "1.0000000000000001e-9");
}

proptest::proptest! {
    #[test]
    fn fmt_sig_roundtrips(v in proptest::num::f64::NORMAL | proptest::num::f64::ZERO) {
        proptest::prop_assert_eq!(fmt_sig(v).parse::<f64>().unwrap(), v);
    }
}
