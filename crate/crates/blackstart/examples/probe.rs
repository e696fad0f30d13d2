// Scratch calibration probe (not part of the deliverable).
use blackstart::compare::{build_comparison, CompareConfig};
use blackstart::frames::AlphaBeta;
use blackstart::sim::cycle_offsets;
use blackstart::{run, MagnetizationProfile, Scenario, SystemParams};

fn main() {
    let p = SystemParams::default_5kva();
    println!(
        "v_hat={:.4} lambda0={:.6} t_d={:.6e} t_a={:.6e}",
        p.v_hat,
        p.lambda0,
        p.t0 / std::f64::consts::TAU,
        p.t0
    );

    let profiles = [
        ("hard", MagnetizationProfile::Hard),
        ("ultrafast", MagnetizationProfile::ultra_fast(&p)),
        ("spiral", MagnetizationProfile::spiral(&p)),
    ];

    println!("--- no filter, no residual (lossy) ---");
    for (name, prof) in profiles {
        let mut sc = Scenario::bench(prof);
        sc.filter = None;
        let r = run(&sc).unwrap();
        println!(
            "{name:9} peak_pcc={:.4}pu offset={:.5}Wb startup={:?}",
            r.metrics.peak_i_pcc_pu, r.metrics.flux_dc_offset_wb, r.metrics.startup_time_s
        );
        let cycles = cycle_offsets(&r.series, &p);
        let mags: Vec<String> = cycles.iter().map(|c| format!("{:.4}", c.magnitude())).collect();
        println!("          cycle offsets: {}", mags.join(" "));
    }

    println!("--- with filter, no residual ---");
    for (name, prof) in profiles {
        let sc = Scenario::bench(prof);
        let r = run(&sc).unwrap();
        println!(
            "{name:9} peak_inv={:.4}pu peak_pcc={:.4}pu startup={:?}",
            r.metrics.peak_i_inv_pu, r.metrics.peak_i_pcc_pu, r.metrics.startup_time_s
        );
    }

    println!("--- residual 0.5 lambda0, worst-case orientation, no filter ---");
    for (name, prof, dir) in [
        ("hard", MagnetizationProfile::Hard, AlphaBeta::new(0.0, 1.0)),
        ("ultrafast", MagnetizationProfile::ultra_fast(&p), AlphaBeta::new(1.0, 0.0)),
        ("spiral", MagnetizationProfile::spiral(&p), AlphaBeta::new(1.0, 0.0)),
    ] {
        let mut sc = Scenario::bench(prof);
        sc.filter = None;
        sc.residual = dir * (0.5 * p.lambda0);
        let r = run(&sc).unwrap();
        println!("{name:9} peak_pcc={:.4}pu offset={:.5}Wb", r.metrics.peak_i_pcc_pu, r.metrics.flux_dc_offset_wb);
    }

    println!("--- demag (residual 0.5 l0 at 30 deg), no filter, dt=5e-6 ---");
    {
        let mut sc = Scenario::bench(MagnetizationProfile::ultra_fast(&p));
        sc.filter = None;
        sc.dt = 5e-6;
        sc.residual = AlphaBeta::from_polar(0.5 * p.lambda0, 0.5236);
        sc.demag_first = true;
        match run(&sc) {
            Ok(r) => println!(
                "demag_dur={:?} flux_at_start=({:.5},{:.5}) peak_pcc={:.4}pu offset={:.5}Wb startup={:?}",
                r.demag_duration_s,
                r.flux_at_start.alpha,
                r.flux_at_start.beta,
                r.metrics.peak_i_pcc_pu,
                r.metrics.flux_dc_offset_wb,
                r.metrics.startup_time_s
            ),
            Err(e) => println!("demag no-filter FAILED: {e}"),
        }
    }

    println!("--- demag with filter scenario, dt=1e-6 ---");
    {
        let mut sc = Scenario::bench(MagnetizationProfile::spiral(&p));
        sc.residual = AlphaBeta::from_polar(0.5 * p.lambda0, 2.2);
        sc.demag_first = true;
        match run(&sc) {
            Ok(r) => println!(
                "demag_dur={:?} flux_at_start=({:.5},{:.5}) peak_inv={:.4}pu peak_pcc={:.4}pu",
                r.demag_duration_s,
                r.flux_at_start.alpha,
                r.flux_at_start.beta,
                r.metrics.peak_i_inv_pu,
                r.metrics.peak_i_pcc_pu
            ),
            Err(e) => println!("demag with-filter FAILED: {e}"),
        }
    }

    println!("--- demag sweep over 16 residual angles (no filter, dt=5e-6) ---");
    {
        let t0 = std::time::Instant::now();
        let mut worst = 0.0f64;
        let mut worst_peak = 0.0f64;
        let mut durs = (f64::INFINITY, 0.0f64);
        for k in 0..16 {
            let angle = k as f64 * std::f64::consts::TAU / 16.0;
            let mut sc = Scenario::bench(MagnetizationProfile::ultra_fast(&p));
            sc.filter = None;
            sc.dt = 5e-6;
            sc.t_end = 5.0 * p.t0;
            sc.residual = AlphaBeta::from_polar(0.9 * sc.core.lambda_knee, angle);
            sc.demag_first = true;
            match run(&sc) {
                Ok(r) => {
                    worst = worst.max(r.flux_at_start.magnitude());
                    worst_peak = worst_peak.max(r.metrics.peak_i_pcc_pu);
                    let d = r.demag_duration_s.unwrap();
                    durs = (durs.0.min(d), durs.1.max(d));
                }
                Err(e) => println!("  angle {angle:.2} FAILED: {e}"),
            }
        }
        println!(
            "worst |flux_at_start|={:.5} Wb ({:.2}% l0), worst peak={:.4}pu, demag dur=[{:.4},{:.4}]s, elapsed {:?}",
            worst,
            100.0 * worst / p.lambda0,
            worst_peak,
            durs.0,
            durs.1,
            t0.elapsed()
        );
    }

    println!("--- demag phase timeline for a bad angle (pure beta residual) ---");
    {
        use blackstart::demag::{DemagController, DemagParams, DemagState};
        use blackstart::transformer::{state_derivative, CoreParams, TransformerState};
        let core = CoreParams::default_for(&p);
        let ctrl = DemagController::new(DemagParams::default(), core.l_sat, core.r_wind, p.v_dc);
        let residual = AlphaBeta::from_polar(0.9 * core.lambda_knee, std::f64::consts::FRAC_PI_2);
        let mut tr = TransformerState::from_residual(residual, &p).unwrap();
        let mut ds = DemagState::new();
        let mut last_cmd = blackstart::ThreePhase::ZERO;
        let dt = 5e-6;
        let mut t = 0.0f64;
        let mut last_phase = ds.phase;
        let rk4 = |tr: &TransformerState, v: blackstart::ThreePhase| {
            let f = |s: &TransformerState| state_derivative(&core, s, v).0;
            let k1 = f(tr);
            let k2 = f(&TransformerState { lambda: tr.lambda + k1 * (dt / 2.0) });
            let k3 = f(&TransformerState { lambda: tr.lambda + k2 * (dt / 2.0) });
            let k4 = f(&TransformerState { lambda: tr.lambda + k3 * dt });
            TransformerState { lambda: tr.lambda + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0) }
        };
        let mut printed = 0;
        while !ds.is_done() && t < 2.0 {
            let i = state_derivative(&core, &tr, last_cmd).1;
            let (cmd, next) = match ctrl.step(&ds, i, dt) {
                Ok(x) => x,
                Err(e) => {
                    println!("  ERROR at t={t:.4}: {e}");
                    break;
                }
            };
            if next.phase != last_phase {
                println!(
                    "  t={:8.5} {:?} -> {:?}  lambda=({:+.4},{:+.4},{:+.4}) i=({:+.3},{:+.3},{:+.3}) tau={:.4}",
                    t, last_phase, next.phase, tr.lambda.a, tr.lambda.b, tr.lambda.c, i.a, i.b, i.c, next.tau_measured
                );
                last_phase = next.phase;
            }
            if t < 0.02 && printed < 20 && (t / dt) as u64 % 400 == 0 {
                println!(
                    "  t={:8.5} phase={:?} lambda=({:+.4},{:+.4},{:+.4}) i_a={:+.3} cmd=({:+.1},{:+.1},{:+.1})",
                    t, ds.phase, tr.lambda.a, tr.lambda.b, tr.lambda.c, i.a, cmd.a, cmd.b, cmd.c
                );
                printed += 1;
            }
            ds = next;
            if ds.is_done() {
                break;
            }
            tr = rk4(&tr, cmd);
            last_cmd = cmd;
            t += dt;
        }
        println!(
            "  final t={:.4} lambda=({:+.5},{:+.5},{:+.5})",
            t, tr.lambda.a, tr.lambda.b, tr.lambda.c
        );
    }

    println!("--- lossless hard: first-cycle offset vector ---");
    {
        let mut sc = Scenario::bench(MagnetizationProfile::Hard);
        sc.filter = None;
        sc.core = sc.core.lossless();
        let r = run(&sc).unwrap();
        let c = cycle_offsets(&r.series, &p);
        println!(
            "cycle1=({:.6},{:.6}) want (0,{:.6})",
            c[0].alpha, c[0].beta, p.lambda0
        );
    }

    println!("--- zoh sanity (ultrafast, no filter, zoh on) ---");
    {
        let mut sc = Scenario::bench(MagnetizationProfile::ultra_fast(&p));
        sc.filter = None;
        sc.control_zoh = true;
        let r = run(&sc).unwrap();
        println!(
            "peak_pcc={:.4}pu offset={:.5}Wb startup={:?}",
            r.metrics.peak_i_pcc_pu, r.metrics.flux_dc_offset_wb, r.metrics.startup_time_s
        );
    }

    println!("--- prefluxing volt-second check (lossless, pattern 10/0/-10, d=0.05) ---");
    {
        let mut sc = Scenario::bench(MagnetizationProfile::Off);
        sc.filter = None;
        sc.core = sc.core.lossless();
        sc.prefluxing = Some(blackstart::demag::build_residual_flux(
            blackstart::ThreePhase::new(10.0, 0.0, -10.0),
            0.05,
        ).unwrap());
        let r = run(&sc).unwrap();
        println!("flux_at_start=({:.6},{:.6}) want alpha=0.5? a-phase 10*0.05=0.5", r.flux_at_start.alpha, r.flux_at_start.beta);
    }

    println!("--- full comparison matrix ---");
    let t0 = std::time::Instant::now();
    let rows = build_comparison(&CompareConfig::bench());
    println!("matrix took {:?}", t0.elapsed());
    for row in rows {
        println!(
            "{:9} {:14} pcc={:7.4} inv={:>8} off={:7.4} start={:>12} O/X: offset={} inrush={} surge={} {}",
            row.method,
            row.case.label(),
            row.peak_i_pcc_pu,
            row.peak_i_inv_pu.map_or("-".into(), |v| format!("{v:7.4}")),
            row.flux_offset_wb,
            row.startup_time_s.map_or("-".into(), |v| format!("{v:.6}")),
            if row.offset_eliminated { "O" } else { "X" },
            if row.inrush_suppressed { "O" } else { "X" },
            row.surge_suppressed.map_or("-".into(), |v| if v { "O".into() } else { "X".to_string() }),
            row.error.map_or(String::new(), |e| format!("ERR: {e}")),
        );
    }
}
