//! Acceptance suite. Prints one line per check and one PASS/FAIL line per
//! criterion, then exits non-zero if any criterion failed.

use std::process::ExitCode;

use dot11ah::published::{deviation_pct, published_throughput, RANGES};
use dot11ah::range::RangeColumn;
use dot11ah::reproduce::{reproduce, short_header_gain};
use dot11ah::sweep::max_single_payload;
use dot11ah::validate::{run_validation, CellStatus, ValidateConfig};
use dot11ah_core::profiles::{
    builtin_profile, radio_presets, AckScheme, GuardInterval, ProfileId, StandardProfile,
};
use dot11ah_core::propagation::{max_range, path_loss, PathLossKind, PathLossModel};
use dot11ah_core::throughput::{
    ampdu_breakdown, expected_backoff, max_aggregation, throughput_ampdu, throughput_single,
    FrameSpec,
};

struct Check {
    pass: bool,
    text: String,
}

#[derive(Default)]
struct Criterion {
    checks: Vec<Check>,
}

impl Criterion {
    fn check(&mut self, pass: bool, text: impl Into<String>) {
        self.checks.push(Check {
            pass,
            text: text.into(),
        });
    }

    /// `computed` within `tol_pct` percent of `target`.
    fn near(&mut self, label: &str, computed: f64, target: f64, tol_pct: f64) {
        let dev = deviation_pct(computed, target);
        self.check(
            dev.abs() <= tol_pct,
            format!("{label}: {computed:.6} vs {target} ({dev:+.3}%, tolerance {tol_pct}%)"),
        );
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn single(id: ProfileId, payload: u32, per: f64) -> f64 {
    let p = builtin_profile(id);
    throughput_single(&p, &FrameSpec::for_profile(&p, payload), per, 0.0)
        .unwrap()
        .s_mbps
}

fn printed(id: ProfileId, k: Option<u32>, payload: u32, per: f64) -> f64 {
    published_throughput(id, k, payload, per)
        .unwrap_or_else(|| panic!("no published value for {id} k={k:?} {payload} B per {per}"))
        .s_mbps
}

fn range_table() -> Criterion {
    let mut c = Criterion::default();
    for r in RANGES.iter() {
        let column = RangeColumn::preset(r.profile, r.preset).unwrap();
        let budget = column.profile.link_budget().unwrap();
        let d = max_range(&budget, &PathLossModel::new(r.model)).unwrap();
        let tol = match r.model {
            PathLossKind::IndoorC | PathLossKind::IndoorD => 1.0,
            PathLossKind::Macro | PathLossKind::Pico => 6.0,
        };
        c.near(
            &format!("{} {}", r.model.label(), column.label),
            d,
            r.range_m,
            tol,
        );
    }
    let ah = builtin_profile(ProfileId::AhLongHeader)
        .link_budget()
        .unwrap();
    let ah_macro = max_range(&ah, &PathLossModel::MACRO).unwrap();
    c.near("macro ah-long-header, tight", ah_macro, 1561.0, 0.5);
    c
}

fn ah_single() -> Criterion {
    let mut c = Criterion::default();
    let id = ProfileId::AhLongHeader;
    for (payload, per, tol) in [
        (475, 0.0, 1.0),
        (475, 0.5, 1.0),
        (12, 0.0, 1.0),
        (12, 0.5, 1.5),
    ] {
        c.near(
            &format!("ah-long-header {payload} B PER {per} (Mbps)"),
            single(id, payload, per),
            printed(id, None, payload, per),
            tol,
        );
    }
    c
}

fn a_single() -> Criterion {
    let mut c = Criterion::default();
    for (payload, per, tol) in [
        (1500, 0.0, 1.0),
        (1500, 0.5, 2.0),
        (50, 0.0, 10.0),
        (50, 0.5, 10.0),
    ] {
        c.near(
            &format!("a {payload} B PER {per}"),
            single(ProfileId::A, payload, per),
            printed(ProfileId::A, None, payload, per),
            tol,
        );
    }
    c
}

fn ac_n_single() -> Criterion {
    let mut c = Criterion::default();
    for id in [ProfileId::Ac, ProfileId::N24, ProfileId::N5] {
        c.near(
            &format!("{id} 1500 B PER 0"),
            single(id, 1500, 0.0),
            5.6,
            2.0,
        );
        c.near(
            &format!("{id} 1500 B PER 0.5"),
            single(id, 1500, 0.5),
            2.5,
            15.0,
        );
    }
    c.near("ac 12 B PER 0", single(ProfileId::Ac, 12, 0.0), 0.33, 2.0);
    c.near(
        "ac 12 B PER 0.5",
        single(ProfileId::Ac, 12, 0.5),
        0.08,
        15.0,
    );
    for ack in [AckScheme::NormalAck, AckScheme::NdpAck] {
        let gain = 100.0 * short_header_gain(475, ack).unwrap();
        c.check(
            gain < 1.0,
            format!("ah short header with {ack} at 475 B: gain {gain:.3}% (required < 1%)"),
        );
    }
    c
}

fn aggregation() -> Criterion {
    let mut c = Criterion::default();
    let ah = builtin_profile(ProfileId::AhLongHeader);
    let ac = builtin_profile(ProfileId::Ac);
    let ac_short = ac.with_guard_interval(GuardInterval::Short).unwrap();
    for (label, p, payload, want) in [
        ("ah-long-header 12 B", &ah, 12, 9),
        ("ah-long-header 475 B", &ah, 475, 1),
        ("ac 12 B", &ac, 12, 64),
        ("ac 1500 B, 3.6 us symbols", &ac_short, 1500, 3),
    ] {
        let k = max_aggregation(p, payload).unwrap().k;
        c.check(
            k == want,
            format!("max_aggregation {label}: K={k} (expected {want})"),
        );
    }
    let s = |p: &StandardProfile, payload, k| {
        throughput_ampdu(p, payload, 0.0, Some(k), 0.0)
            .unwrap()
            .0
            .s_mbps
    };
    c.near("ac short gi K=3 1500 B", s(&ac_short, 1500, 3), 6.71, 1.0);
    c.near("ac short gi K=64 12 B", s(&ac_short, 12, 64), 1.56, 1.0);
    let long_k3 = ampdu_breakdown(&ac, 1500, 0.0, 3, 0.0).unwrap().s_mbps;
    c.near(
        "ac long gi K=3 1500 B (derived, cap set aside)",
        long_k3,
        6.07,
        1.0,
    );
    c.near("ac long gi K=64 12 B (derived)", s(&ac, 12, 64), 1.42, 1.0);
    c.near(
        "ah-long-header K=9 12 B block ack (derived)",
        s(&ah, 12, 9),
        0.0302,
        1.0,
    );

    let dir = std::env::temp_dir().join(format!("dot11ah-acceptance-{}", std::process::id()));
    let report = reproduce(&dir).and_then(|_| Ok(std::fs::read_to_string(dir.join("REPORT.md"))?));
    let _ = std::fs::remove_dir_all(&dir);
    let noted = report.is_ok_and(|r| r.contains("36.9 kbps is not reproduced"));
    c.check(noted, "report records the unreproduced 36.9 kbps value");
    c
}

/// Kahan-summed series over the delivering stage, 10^4 terms.
fn truncated_backoff(p: &StandardProfile, per: f64) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for i in 1..=10_000u32 {
        let cw = if i < 6 {
            2f64.powi(i as i32 - 1) * f64::from(p.cw_min + 1) - 1.0
        } else {
            f64::from(p.cw_max)
        };
        let term = (1.0 - per) * per.powi(i as i32 - 1) * cw / 2.0 * p.t_slot_us - comp;
        let next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    sum
}

fn properties() -> Criterion {
    let mut c = Criterion::default();

    // Breakpoint continuity: the one-sided values converge at the breakpoint.
    let eps = 1e-9;
    let mut worst_jump = 0.0f64;
    for model in [PathLossModel::INDOOR_C, PathLossModel::INDOOR_D] {
        let bp = model.breakpoint_m.unwrap();
        for f in [900.0, 2400.0, 5150.0, 5450.0] {
            let jump =
                path_loss(&model, bp + eps, f).unwrap() - path_loss(&model, bp - eps, f).unwrap();
            worst_jump = worst_jump.max(jump.abs());
        }
    }
    c.check(
        worst_jump <= 1e-6,
        format!("breakpoint continuity: largest jump {worst_jump:.3e} dB across +-{eps} m"),
    );

    // Range inversion round trip on every model and preset.
    let mut worst_rt = 0.0f64;
    for id in ProfileId::ALL {
        for preset in radio_presets(id) {
            let p = builtin_profile(id).with_preset(preset.name).unwrap();
            let budget = p.link_budget().unwrap();
            for model in PathLossModel::all() {
                let d = max_range(&budget, &model).unwrap();
                let loss = path_loss(&model, d, budget.carrier_freq_mhz()).unwrap();
                worst_rt = worst_rt.max((loss - budget.budget_db()).abs());
            }
        }
    }
    c.check(
        worst_rt <= 1e-6,
        format!("range inversion round trip: worst {worst_rt:.3e} dB"),
    );

    // 20 payloads x 10 PER values per profile.
    let pers: Vec<f64> = (0..10).map(|i| f64::from(i) / 10.0).collect();
    let (mut monotone, mut ceiling, mut k1, mut points) = (true, true, true, 0);
    for id in ProfileId::ALL {
        let p = builtin_profile(id);
        let hi = max_single_payload(&p);
        for j in 0..20u32 {
            let payload = 12 + (hi - 12) * j / 19;
            let mut last = f64::INFINITY;
            for &per in &pers {
                let frame = FrameSpec::for_profile(&p, payload);
                let s = throughput_single(&p, &frame, per, 0.0).unwrap();
                monotone &= s.s_mbps < last;
                last = s.s_mbps;
                let (agg, _) = throughput_ampdu(&p, payload, per, None, 0.0).unwrap();
                ceiling &= s.s_mbps <= p.bit_rate_mbps && agg.s_mbps <= p.bit_rate_mbps;
                let block =
                    throughput_single(&p, &frame.with_ack(AckScheme::BlockAck), per, 0.0).unwrap();
                k1 &= block == ampdu_breakdown(&p, payload, per, 1, 0.0).unwrap();
                points += 1;
            }
        }
    }
    c.check(
        monotone,
        format!("throughput strictly decreasing in PER ({points} grid points)"),
    );
    c.check(
        ceiling,
        "throughput below the PHY rate at every grid point (single and A-MPDU)",
    );
    c.check(
        k1,
        "K=1 aggregate equals a block-acked single frame, exactly",
    );

    let mut worst_bo = 0.0f64;
    for id in ProfileId::ALL {
        let p = builtin_profile(id);
        for step in 0..100 {
            let per = f64::from(step) / 100.0;
            worst_bo = worst_bo
                .max((expected_backoff(&p, per).unwrap() - truncated_backoff(&p, per)).abs());
        }
    }
    c.check(
        worst_bo <= 1e-9,
        format!("backoff closed form vs 10^4-term series: worst {worst_bo:.3e} us"),
    );
    c
}

fn monte_carlo() -> Criterion {
    let mut c = Criterion::default();
    let report = run_validation(&ValidateConfig::default()).unwrap();
    for cell in &report.cells {
        c.check(
            cell.status == CellStatus::Pass,
            format!(
                "{} PER {} backoff: {:.4} us vs {:.4} us (z = {:+.3})",
                cell.profile,
                cell.per,
                cell.backoff.mean_backoff_us,
                cell.analytical_backoff_us,
                cell.z
            ),
        );
    }
    for cell in &report.cells {
        let goodput = cell.goodput_mbps();
        let se = cell.goodput_stderr_mbps();
        let z = (goodput - cell.analytical_mbps) / se;
        c.check(
            goodput <= cell.analytical_mbps,
            format!(
                "{} PER {} full-cycle goodput {:.6} <= analytical {:.6} (z = {z:+.2}, within 3 stderr: {})",
                cell.profile,
                cell.per,
                goodput,
                cell.analytical_mbps,
                z <= 3.0
            ),
        );
    }
    c
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Criterion); 7] = [
        ("range table", range_table),
        ("802.11ah single-frame throughput", ah_single),
        ("802.11a throughput", a_single),
        ("802.11ac/n throughput and short-header gain", ac_n_single),
        ("aggregation planning", aggregation),
        ("property suite", properties),
        ("Monte Carlo oracle", monte_carlo),
    ];
    let mut failed = Vec::new();
    for (i, (title, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        let result = run();
        for check in &result.checks {
            println!(
                "    [{}] {}",
                if check.pass { "ok" } else { "MISS" },
                check.text
            );
        }
        let verdict = if result.passed() { "PASS" } else { "FAIL" };
        println!("criterion {n}: {verdict}  {title}");
        if !result.passed() {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 7 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!(
            "acceptance: {} of 7 criteria fail: {failed:?}",
            failed.len()
        );
        ExitCode::FAILURE
    }
}
