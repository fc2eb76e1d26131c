use cjt_cli::family::{member, Family, FamilyConfig};
use cjt_cli::format::ModuleFile;
use cjt_core::KEModule;
use cjt_exact::FieldCtx;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn family_members_round_trip(seed in any::<u64>(), index in 0usize..50) {
        let cfg = FamilyConfig { max_dim: 16, ..FamilyConfig::default() };
        let m = member(Family::All, seed, index, &cfg).unwrap().module;
        let text = ModuleFile::from_module(&m, Some("member".into())).to_json();
        let back = ModuleFile::parse(&text).unwrap().to_module().unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(ModuleFile::from_module(&back, Some("member".into())).to_json(), text);
    }

    #[test]
    fn extension_field_modules_round_trip(p in prop::sample::select(vec![2u32, 3]), k in 2u32..4, n in 1usize..4) {
        let f = FieldCtx::new(p, k, None).unwrap();
        let m = KEModule::w_module(&f, n, 1.max(n.min(p as usize))).unwrap().dual();
        let text = ModuleFile::from_module(&m, None).to_json();
        prop_assert_eq!(ModuleFile::parse(&text).unwrap().to_module().unwrap(), m);
    }
}
