//! Quasi-rational rogue waves of rank 1, 2 and 3 in multi-time form.
//!
//! `Ψ_N = (1 − c_N (G + iH)/Q) · exp(i(2t1 − 6t3 + 20t5))` with phases
//! `X = 2x − 12t2 + 60t4`, `T1 = 4t1 − 24t3 + 120t5`, `T2 = −48t2 + 480t4`,
//! `T3 = −96t3 + 960t5`, `T4 = −3840t4`, `T5 = −7680t5`.
//!
//! The rank-2 polynomials are normalized differently in `T2`, `T3`: they solve
//! the `t2..t5` flows only with those two phases doubled, see [`RANK2_PHASE_MAP`].

use std::sync::OnceLock;

use super::polytab::{MultiPoly, NVARS};

/// Rank-2 `G, H, Q`.
const RANK2_G: &str = "(X^2+3T1^2+3)^2 - 4T1^4 + 2XT2 + 2T1T3 - 12";
const RANK2_H: &str = "T1(X^2+T1^2+1)^2 + 2XT1T2 + T3(T1^2-X^2-1) - 8T1(X^2+2)";
const RANK2_Q: &str = "(X^2+T1^2+1)^3 + T2^2 + 2XT2(3T1^2-X^2+3) + T3^2 \
    + 2T1T3(T1^2-3X^2+9) + 24T1^4 - 24T1^2X^2 + 96T1^2 + 24X^2 + 8";

/// Rank-3 `G = X^10 + sum g_j X^j`.
const RANK3_G_LEAD: &str = "X^10";
const RANK3_G: [(u32, &str); 8] = [
    (8, "15T1^2+15"),
    (6, "50T1^4-60T1^2-80T1T3+210"),
    (5, "120T1^2T2+120T2+18T4"),
    (
        4,
        "70T1^6-150T1^4-200T1^3T3+450T1^2-(600T3-30T5)T1+150T2^2-50T3^2-450",
    ),
    (3, "400T1^4T2+(2400T2+60T4)T1^2+800T1T2T3-1200T2+60T4"),
    (
        2,
        "45T1^8+420T1^6+6750T1^4+(2400T3+180T5)T1^3
         -(300T2^2-900T3^2+13500)T1^2-(7200T3-180T5)T1-300T2^2-300T3^2-675",
    ),
    (
        1,
        "280T1^6T2-(600T2+150T4)T1^4-800T1^3T2T3+(1800T2-540T4)T1^2
         -(2400T2T3-120T2T5+120T3T4)T1-200T2^3-200T2T3^2-1800T2+90T4",
    ),
    (
        0,
        "11T1^10+495T1^8+120T1^7T3+2190T1^6+(2040T3-42T5)T1^5+(350T2^2+150T3^2-7650)T1^4
         +(1800T3-420T5)T1^3+(300T2^2-120T2T4+300T3^2-120T3T5-2025)T1^2
         -(200T2^2T3+200T3^3-1800T3+90T5)T1+750T2^2-120T2T4+2550T3^2
         -240T3T5+6T4^2+6T5^2+675",
    ),
];

/// Rank-3 `H = T1 X^10 + sum h_j X^j`.
const RANK3_H_LEAD: &str = "T1X^10";
const RANK3_H: [(u32, &str); 8] = [
    (8, "5T1^3-15T1-5T3"),
    (6, "10T1^5-140T1^3-40T1^2T3-150T1+40T3-5T5"),
    (5, "40T1^3T2-6(20T2-3T4)T1-40T2T3"),
    (
        4,
        "10T1^7-210T1^5-50T1^4T3-450T1^3-15(20T3-T5)T1^2+50(3T2^2-T3^2-27)T1
         +15(10T3-T5)",
    ),
    (
        3,
        "80T1^5T2+20(40T2+T4)T1^3+400T1^2T2T3-60(20T2+T4)T1-20(20T2T3-T2T5+T3T4)",
    ),
    (
        2,
        "5T1^9-60T1^7+1710T1^5+15(80T3+3T5)T1^4-100(T2^2-3T3^2+63)T1^3-90T1^2T5
         +75(4T2^2+4T3^2+63)T1+5(20T2^2T3+20T3^3+720T3-27T5)",
    ),
    (
        1,
        "40T1^7T2-30(28T2+T4)T1^5-200T1^4T2T3-60(30T2+T4)T1^3-60(20T2T3-T2T5+T3T4)T1^2
         -50(4T2^3+4T2T3^2+108T2-9T4)T1+60(10T2T3-T2T5+T3T4)",
    ),
    (
        0,
        "T1^11+25T1^9+15T1^8T3-870T1^7+(100T3-7T5)T1^6+10(7T2^2+3T3^2-963)T1^5
         -75(58T3+T5)T1^4-5(100T2^2+8T2T4+100T3^2+8T3T5+495)T1^3
         -5(20T2^2T3+20T3^3+1980T3-99T5)T1^2
         -3(350T2^2-40T2T4+550T3^2-2T4^2-2T5^2-1575)T1
         +5(20T2^2T3-4T2^2T5+8T2T3T4-60T3^3+4T3^2T5+315T3-9T5)",
    ),
];

/// Rank-3 `Q = (X^2+T1^2+1)^6 − 20T2X^9 + sum q_j X^j`.
const RANK3_Q_LEAD: &str = "(X^2+T1^2+1)^6 - 20T2X^9";
const RANK3_Q: [(u32, &str); 9] = [
    (8, "-120T1^2-60T1T3+120"),
    (7, "-12T4"),
    (6, "-240T1^4-160T1^3T3+480T1^2+(960T3-60T5)T1+60T2^2+140T3^2+2320"),
    (5, "120T1^4T2-(720T2-108T4)T1^2-480T1T2T3+1080T2+108T4"),
    (
        4,
        "-120T1^5T3-1440T1^4-(3600T3-60T5)T1^3+(900T2^2-300T3^2+13440)T1^2
         -(5400T3-540T5)T1+900T2^2+120T2T4-1500T3^2+120T3T5+3360",
    ),
    (
        3,
        "160T1^6T2+(7200T2+60T4)T1^4+1600T1^3T2T3+(21600T2-360T4)T1^2
         +(4800T2T3+240T2T5-240T3T4)T1+400T2^3+400T2T3^2-7200T2+540T4",
    ),
    (
        2,
        "240T1^8+13440T1^6+(4320T3+108T5)T1^5-(300T2^2-900T3^2-78240)T1^4
         +(43200T3+1080T5)T1^3+(1800T2^2+16200T3^2-36480)T1^2
         +(1200T2^2T3+1200T3^3-64800T3+2700T5)T1-2700T2^2+900T3^2-720T3T5
         +36T4^2+36T5^2+12144",
    ),
    (
        1,
        "60T1^8T2+(240T2-60T4)T1^6-480T1^5T2T3-(5400T2+1620T4)T1^4
         -(14400T2T3-240T2T5+240T3T4)T1^3-(1200T2^3+1200T2T3^2-54000T2+5940T4)T1^2
         -(21600T2T3-2160T2T5+2160T3T4)T1-1200T2^3+240T2^2T4-6000T2T3^2
         +480T2T3T5-240T4T3^2+13500T2-540T4",
    ),
    (
        0,
        "120T1^10+20T1^9T3+3720T1^8+(1200T3-12T5)T1^7+(140T2^2+60T3^2+15280)T1^6
         +(5400T3-612T5)T1^5+(900T2^2-120T2T4-1500T3^2-120T3T5+143760)T1^4
         -(400T2^2T3+400T3^3-82800T3-540T5)T1^3
         +(8100T2^2+720T2T4+18900T3^2+36T4^2+36T5^2+93144)T1^2
         +(6000T2^2T3-240T2^2T5+480T2T3T4+1200T3^3+240T3^2T5+83700T3-2700T5)T1
         +400T2^4+800T3^2T2^2+400T3^4+9900T2^2-1080T2T4+24300T3^2-1800T3T5
         +36T4^2+36T5^2+2024",
    ),
];

/// `G`, `H`, `Q` and the prefactor `c_N` in `1 − c_N (G + iH)/Q`.
#[derive(Debug)]
pub struct RogueTable {
    pub g: MultiPoly,
    pub h: MultiPoly,
    pub q: MultiPoly,
    pub prefactor: f64,
    pub phase_map: &'static [[f64; 6]; NVARS],
}

fn assemble(lead: &str, parts: &[(u32, &str)]) -> MultiPoly {
    let mut acc = MultiPoly::parse(lead).expect("leading term parses");
    for (j, src) in parts {
        let c = MultiPoly::parse(src).expect("coefficient parses");
        let xj = MultiPoly::var(0).pow(*j);
        acc = acc.add(&c.mul(&xj));
    }
    acc
}

pub fn rank1() -> &'static RogueTable {
    static T: OnceLock<RogueTable> = OnceLock::new();
    T.get_or_init(|| RogueTable {
        g: MultiPoly::constant(1),
        h: MultiPoly::parse("T1").unwrap(),
        q: MultiPoly::parse("X^2+T1^2+1").unwrap(),
        prefactor: 4.0,
        phase_map: &PHASE_MAP,
    })
}

pub fn rank2() -> &'static RogueTable {
    static T: OnceLock<RogueTable> = OnceLock::new();
    T.get_or_init(|| RogueTable {
        g: MultiPoly::parse(RANK2_G).unwrap(),
        h: MultiPoly::parse(RANK2_H).unwrap(),
        q: MultiPoly::parse(RANK2_Q).unwrap(),
        prefactor: 12.0,
        phase_map: &RANK2_PHASE_MAP,
    })
}

pub fn rank3() -> &'static RogueTable {
    static T: OnceLock<RogueTable> = OnceLock::new();
    T.get_or_init(|| RogueTable {
        g: assemble(RANK3_G_LEAD, &RANK3_G),
        h: assemble(RANK3_H_LEAD, &RANK3_H),
        q: assemble(RANK3_Q_LEAD, &RANK3_Q),
        prefactor: 24.0,
        phase_map: &PHASE_MAP,
    })
}

/// Linear maps `(x, t1..t5) → (X, T1..T5)`, one row per phase.
pub const PHASE_MAP: [[f64; 6]; NVARS] = [
    [2.0, 0.0, -12.0, 0.0, 60.0, 0.0],
    [0.0, 4.0, 0.0, -24.0, 0.0, 120.0],
    [0.0, 0.0, -48.0, 0.0, 480.0, 0.0],
    [0.0, 0.0, 0.0, -96.0, 0.0, 960.0],
    [0.0, 0.0, 0.0, 0.0, -3840.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, -7680.0],
];

/// [`PHASE_MAP`] with the `T2` and `T3` rows doubled.
pub const RANK2_PHASE_MAP: [[f64; 6]; NVARS] = [
    PHASE_MAP[0],
    PHASE_MAP[1],
    [0.0, 0.0, -96.0, 0.0, 960.0, 0.0],
    [0.0, 0.0, 0.0, -192.0, 0.0, 1920.0],
    PHASE_MAP[4],
    PHASE_MAP[5],
];

/// Carrier phase `2t1 − 6t3 + 20t5` (the `t2`, `t4` coefficients vanish).
pub const CARRIER: [f64; 5] = [2.0, 0.0, -6.0, 0.0, 20.0];
