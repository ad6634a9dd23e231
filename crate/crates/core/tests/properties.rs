mod common;

use common::{permutation_boundary, surface_cw_euler};
use openbook_ribbons::io::{parse_bsurf, parse_front, parse_morse, write_bsurf, write_front, write_morse};
use openbook_ribbons::morse::{builtin_diagram, BUILTIN_NAMES};
use openbook_ribbons::rational::{q, signed_delta, simplest_between, unit};
use openbook_ribbons::surface::{
    bennequin_from_bands, destabilize, euler_characteristic, positive_markov_stabilization, self_linking,
    BennequinSurface,
};
use openbook_ribbons::{random_graph_front, Q};
use proptest::prelude::*;

/// Bands as `(from, offset, sign)`; `to = (from + offset) % d` with offset >= 1.
fn surface_strategy() -> impl Strategy<Value = BennequinSurface> {
    (2usize..7).prop_flat_map(|d| {
        prop::collection::vec((0..d, 1..d, prop::bool::ANY), 0..10).prop_map(move |raw| {
            let k = raw.len().max(1) as i128;
            let bands: Vec<_> = raw
                .iter()
                .enumerate()
                .map(|(t, &(i, off, pos))| (q(t as i128, k), i, (i + off) % d, if pos { 1 } else { -1 }))
                .collect();
            bennequin_from_bands(d, &bands).unwrap()
        })
    })
}

fn rational() -> impl Strategy<Value = Q> {
    (-40i128..40, 1i128..20).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #[test]
    fn euler_matches_cells(s in surface_strategy()) {
        prop_assert_eq!(euler_characteristic(&s), surface_cw_euler(&s));
    }

    #[test]
    fn boundary_matches_permutation(s in surface_strategy()) {
        prop_assert_eq!(s.report().boundary_components, permutation_boundary(&s));
    }

    #[test]
    fn self_linking_is_writhe_minus_strands(s in surface_strategy()) {
        let writhe: i64 = s.bands.iter().map(|b| b.sign as i64).sum();
        prop_assert_eq!(self_linking(&s), writhe - s.disks.len() as i64);
    }

    #[test]
    fn bennequin_bound_holds(s in surface_strategy()) {
        let r = s.report();
        prop_assert!(r.self_linking <= -r.euler_char);
        prop_assert_eq!(r.bennequin_slack == 0, s.b_minus() == 0);
    }

    #[test]
    fn stabilization_round_trip(s in surface_strategy(), times in 1usize..4) {
        let mut cur = s.clone();
        for _ in 0..times {
            cur = positive_markov_stabilization(&cur);
        }
        let (a, b) = (s.report(), cur.report());
        prop_assert_eq!(
            (a.euler_char, a.self_linking, a.boundary_components, a.is_sqp),
            (b.euler_char, b.self_linking, b.boundary_components, b.is_sqp)
        );
        for _ in 0..times {
            cur = destabilize(&cur).unwrap();
        }
        prop_assert_eq!(cur, s);
    }

    #[test]
    fn bsurf_round_trip(s in surface_strategy()) {
        let text = write_bsurf(&s);
        let back = parse_bsurf(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(write_bsurf(&back), text);
    }

    #[test]
    fn front_round_trip(which in 0usize..4, seed in 0u64..40) {
        let name = BUILTIN_NAMES[which];
        let d = builtin_diagram(name).unwrap();
        let f = random_graph_front(seed, 4, &d).unwrap();
        let text = write_front(name, &f);
        let (r, back) = parse_front(&text).unwrap();
        prop_assert_eq!(r.as_str(), name);
        prop_assert_eq!(write_front(name, &back), text);
    }

    #[test]
    fn unit_and_delta(a in rational(), b in rational()) {
        let (ua, ub) = (unit(a), unit(b));
        prop_assert!(ua >= q(0, 1) && ua < q(1, 1));
        prop_assert!(unit(ua - a).numer() == &0);
        let dl = signed_delta(ua, ub);
        prop_assert!(dl > q(-1, 2) && dl <= q(1, 2));
        prop_assert_eq!(unit(ua + dl), ub);
    }

    #[test]
    fn simplest_is_inside(a in rational(), b in rational()) {
        prop_assume!(a != b);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let s = simplest_between(lo, hi);
        prop_assert!(lo < s && s < hi);
        // nothing with a smaller denominator fits
        for den in 1..*s.denom() {
            let n = (lo * Q::from_integer(den)).floor() + Q::from_integer(1);
            prop_assert!(n / Q::from_integer(den) >= hi);
        }
    }
}

#[test]
fn morse_round_trip() {
    for name in BUILTIN_NAMES {
        let text = write_morse(&builtin_diagram(name).unwrap());
        assert_eq!(write_morse(&parse_morse(&text).unwrap()), text, "{name}");
    }
}
