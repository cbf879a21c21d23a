use std::sync::Arc;
use std::time::Instant;

use grouptensor::modrep::semisimple_summary;
use grouptensor::report::{bounds_report, gap_eval, gap_scan, quasirandom_probe, reports_from_json, reports_to_json};
use grouptensor::{Config, Group};

const CROSSOVER_PRIME: u64 = 27_689;
const LAST_PRIME_BELOW: u64 = 27_673;

fn group(desc: &str) -> Arc<Group> {
    Arc::new(Group::from_descriptor(desc, &Config::default()).unwrap())
}

#[test]
fn gap_crossover_is_frozen() {
    let t = Instant::now();
    let scan = gap_scan(100_003).unwrap();
    assert!(t.elapsed().as_secs() < 10);
    assert_eq!(scan.crossover, Some(CROSSOVER_PRIME));
    assert!(scan.stays_above_one);
    assert_eq!(scan.last_below.as_ref().unwrap().p, LAST_PRIME_BELOW);
    let at = scan.at_crossover.unwrap();
    assert!(at.ratio_exceeds_one && at.ratio_num > at.ratio_den);
    assert!(gap_scan(CROSSOVER_PRIME - 1).unwrap().crossover.is_none());
}

#[test]
fn char_p_formula_matches_modrep() {
    let cfg = Config::default();
    for p in [3u64, 5, 7, 11, 13] {
        let g = group(&format!("psl2:{p}"));
        let s = semisimple_summary(&g, p as u32, 5, &cfg).unwrap();
        assert_eq!(gap_eval(p).unwrap().sr_lb_char_p, s.dim_semisimple as u128, "p = {p}");
    }
}

#[test]
fn char_ell_formula_is_a_lower_bound() {
    let cfg = Config::default();
    for (p, ell) in [(7u64, 2u32), (7, 3), (11, 2), (11, 3), (11, 5), (13, 2), (13, 3), (13, 7)] {
        let g = group(&format!("psl2:{p}"));
        let s = semisimple_summary(&g, ell, 5, &cfg).unwrap();
        assert!(gap_eval(p).unwrap().sr_lb_char_ell <= s.dim_semisimple as u128, "p = {p}, ell = {ell}");
    }
}

#[test]
fn psl2_7_probe_is_frozen() {
    let rows = quasirandom_probe(&[group("psl2:7")], 11, &Config::default());
    assert_eq!(rows[0].min_ell, Some(2));
    assert_eq!(rows[0].min_dim_semisimple, Some(83));
    assert_eq!(rows[0].ratio, Some(83.0 / 168.0));
}

#[test]
fn report_invariants() {
    let cfg = Config::default();
    for desc in ["cyclic:12", "ea:2:3", "sl2:3", "psl2:7", "prod:cyclic:3,cyclic:5"] {
        let r = bounds_report(&group(desc), 4, &cfg).unwrap();
        let min = r.per_ell.iter().filter_map(|row| row.dim_semisimple).min().unwrap();
        assert_eq!(r.sr_group_lower, min, "{desc}");
        assert!(r.sr_group_lower <= r.order);
        assert!(r.matching_lower as u64 <= r.matching_upper && r.matching_upper <= r.order as u64);
        assert_eq!(r.per_ell.last().unwrap().dim_semisimple, Some(r.order));
        for row in &r.per_ell {
            assert!(row.error.is_none(), "{desc}: {:?}", row.error);
            assert_eq!(row.dim_semisimple.unwrap() + row.dim_radical.unwrap(), r.order);
            if let Some(regular) = row.ell_regular_classes {
                if let Some(count) = row.simple_count {
                    assert!(count <= regular);
                }
            }
        }
        assert_eq!(reports_from_json(&reports_to_json(std::slice::from_ref(&r)).unwrap()).unwrap(), vec![r.clone()]);
        assert_eq!(bounds_report(&group(desc), 4, &cfg).unwrap(), r, "{desc} not deterministic");
    }
}
