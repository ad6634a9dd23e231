//! Regenerate the files under `samples/`.
//!
//! cargo run -p openbook-ribbons --example write_samples -- samples

use std::path::PathBuf;

use openbook_ribbons::generate::BUILTIN_FRONTS;
use openbook_ribbons::io::{write_arc, write_bsurf, write_front, write_morse};
use openbook_ribbons::morse::BUILTIN_NAMES;
use openbook_ribbons::rational::q;
use openbook_ribbons::satellite::{cable, CompanionSummary};
use openbook_ribbons::{bennequin_from_bands, builtin_diagram, builtin_front, ribbon_to_bennequin, to_arc_position};

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "samples".into()));
    std::fs::create_dir_all(&dir).unwrap();
    let put = |name: &str, text: String| std::fs::write(dir.join(name), text).unwrap();
    for name in BUILTIN_NAMES {
        put(&format!("{name}.morse"), write_morse(&builtin_diagram(name).unwrap()));
    }
    for name in BUILTIN_FRONTS {
        let (dn, f) = builtin_front(name).unwrap();
        let d = builtin_diagram(&dn).unwrap();
        put(&format!("{name}.front"), write_front(&format!("{dn}.morse"), &f));
        let (a, _) = to_arc_position(&f, &d, None).unwrap();
        put(&format!("{name}.arc"), write_arc(&format!("{dn}.morse"), &a));
        put(&format!("{name}.bsurf"), write_bsurf(&ribbon_to_bennequin(&a).unwrap()));
    }
    let trefoil = bennequin_from_bands(2, &[(q(0, 1), 0, 1, 1), (q(1, 3), 0, 1, 1), (q(2, 3), 0, 1, 1)]).unwrap();
    put("trefoil.bsurf", write_bsurf(&trefoil));
    let mixed = bennequin_from_bands(3, &[(q(1, 5), 0, 1, 1), (q(2, 5), 1, 2, -1), (q(3, 5), 0, 2, 1)]).unwrap();
    put("mixed_signs.bsurf", write_bsurf(&mixed));
    let c = cable(2, 3, &CompanionSummary::from_surface(&trefoil)).unwrap();
    put("trefoil_cable_2_3.bsurf", write_bsurf(c.surface.as_ref().unwrap()));
}
