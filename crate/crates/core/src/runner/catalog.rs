//! Static scenario catalog.

pub struct Entry {
    pub id: &'static str,
    pub anchors: &'static str,
    pub summary: &'static str,
}

/// Sorted by id.
pub const CATALOG: &[Entry] = &[
    Entry {
        id: "beam",
        anchors: "Eqs. (51)–(55)",
        summary: "self-focusing beam: S profile, orbit fan, blow-up and caustic times",
    },
    Entry {
        id: "bunch",
        anchors: "Eqs. (66)–(74)",
        summary: "expanding plasma bunch: kinetic invariants, density law, particle oracle",
    },
    Entry {
        id: "chaplygin-slab",
        anchors: "Eqs. (35), (40), (42), (49)–(50)",
        summary: "expanding slab in a defocusing medium and Gaussian-beam approximate symmetries",
    },
    Entry {
        id: "chaplygin-soliton",
        anchors: "Eqs. (35), (39), (41), (47)–(48), (56)–(58)",
        summary: "soliton beam collapse, Lie-Backlund invariance and the axis functional",
    },
    Entry {
        id: "hopf",
        anchors: "Eqs. (15)–(25), (59)–(61)",
        summary: "Hopf boundary value problem: implicit solution, blow-up, axis slope",
    },
    Entry {
        id: "resonance",
        anchors: "Eqs. (26)–(34)",
        summary: "plasma resonance: exact two-field solution, secondary fields, harmonics",
    },
    Entry {
        id: "transfer",
        anchors: "Eqs. (1)–(14)",
        summary: "particle transfer: improved solutions, group law, tangency to the expansion",
    },
    Entry {
        id: "verify-all",
        anchors: "Eqs. (1)–(74)",
        summary: "every scenario plus the generator group-law and invariance suites",
    },
];

pub fn is_known(id: &str) -> bool {
    CATALOG.iter().any(|e| e.id == id)
}

pub fn listing() -> String {
    CATALOG
        .iter()
        .map(|e| format!("{}: {}  {}\n", e.id, e.anchors, e.summary))
        .collect()
}
