use dot11ah::scenario::{load_profile_overrides, profile_to_toml};
use dot11ah_core::profiles::{builtin_profile, AckScheme, ProfileId, StandardProfile};
use proptest::prelude::*;

fn any_profile() -> impl Strategy<Value = StandardProfile> {
    let timing = (
        0.5f64..100.0,
        0.5f64..200.0,
        1.0f64..100.0,
        0.0f64..10.0,
        0.1f64..50.0,
        1.0f64..100.0,
    );
    let counts = (
        1u32..64,
        1u32..64,
        1u32..2048,
        1u32..1000,
        1u32..64,
        1u32..64,
        1u32..64,
        1u32..65,
    );
    let caps = (
        proptest::option::of(1u32..10_000),
        proptest::option::of(1.0f64..10_000.0),
    );
    let radio = (
        100.0f64..6000.0,
        -20.0f64..40.0,
        -110.0f64..-50.0,
        0.01f64..100.0,
    );
    (
        0..ProfileId::ALL.len(),
        timing,
        counts,
        caps,
        radio,
        any::<bool>(),
    )
        .prop_map(|(i, t, c, caps, r, ndp)| {
            let id = ProfileId::ALL[i];
            let (sifs, extra_difs, preamble, ext, sym, slot) = t;
            let (header, cw_min, extra_cw, bps, tail, ack, ba, subframes) = c;
            StandardProfile {
                sifs_us: sifs,
                difs_us: sifs + extra_difs,
                t_preamble_header_us: preamble,
                mac_llc_header_bytes: header,
                signal_extension_us: ext,
                t_sym_us: sym,
                t_slot_us: slot,
                cw_min,
                cw_max: cw_min + extra_cw,
                bits_per_symbol: bps,
                service_tail_bits: tail,
                ack_bytes: ack,
                ba_bytes: ba,
                ack_scheme: if ndp && id.is_s1g() {
                    AckScheme::NdpAck
                } else {
                    AckScheme::NormalAck
                },
                max_psdu_bytes: caps.0,
                max_ppdu_duration_us: caps.1,
                max_ampdu_subframes: subframes,
                carrier_freq_mhz: r.0,
                tx_power_dbm: r.1,
                sensitivity_dbm: r.2,
                bit_rate_mbps: r.3,
                ..builtin_profile(id)
            }
        })
}

proptest! {
    #[test]
    fn toml_round_trip(p in any_profile()) {
        prop_assert!(p.validate().is_ok());
        let text = profile_to_toml(&p);
        prop_assert_eq!(load_profile_overrides(&text).unwrap(), p);
    }
}
