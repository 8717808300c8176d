"""Command-line entry point: ``scanclean <command> ...``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import re
import sys
from collections import Counter
from pathlib import Path

import numpy as np

from . import __version__
from .config import SuppressionParams, WeightingKind, load_config
from .engine import SuppressionEngine, write_events
from .errors import ConfigParseError, InvalidModel, ScanCleanError
from .metrics import isnr_db, noise_suppression_db, snr_db, utterance_mask, welch_psd
from .simulate import SIM_BASE_PARAMS, SweepSpec, run_sweep
from .synth import NoiseModel, PulseComponent, gen_gradient_noise, gen_test_utterance
from .wavio import read_wav, write_wav

log = logging.getLogger("scanclean")


def _floats(text):
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _weightings(text):
    try:
        return tuple(WeightingKind.parse(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _params(args, base=None):
    if getattr(args, "config", None):
        return load_config(args.config)
    return base or SuppressionParams()


def load_noise_model(path) -> NoiseModel:
    """Parse a ``key = value`` noise model file.

    Keys: period_s, jitter_s, background_level, seed and
    ``pulses = freq:amp:decay, ...``.
    """
    values = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(lineno, f"expected 'key = value', got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        try:
            if key in ("period_s", "jitter_s", "background_level"):
                values[key] = float(raw)
            elif key == "seed":
                values[key] = int(raw)
            elif key == "pulses":
                comps = []
                for item in raw.split(","):
                    f, a, d = (float(v) for v in item.split(":"))
                    comps.append(PulseComponent(f, a, d))
                values["pulse_spec"] = tuple(comps)
            else:
                raise ConfigParseError(lineno, f"unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigParseError):
                raise
            raise ConfigParseError(lineno, f"bad value for {key}: {raw!r}") from None
    return NoiseModel(**values)


def _summarize(events, sample_rate):
    counts = Counter(e.kind for e in events)
    lines = []
    for e in events:
        if e.kind == "phase_transition":
            extra = ""
            if "period" in e.detail:
                extra = f" (period {e.detail['period']} samples, score {e.detail['score']:.4f})"
            lines.append(f"{e.detail['from']} -> {e.detail['to']} at {e.sample_index / sample_rate:.3f} s{extra}")
    passed = sum(e.detail["length"] for e in events if e.kind == "passthrough")
    lines.append(
        f"matches {counts['match_score']}, template updates {counts['update']}, "
        f"match losses {counts['match_lost']}, passthrough samples {passed}"
    )
    return lines


def cmd_denoise(args):
    params = _params(args)
    x = read_wav(args.input)
    eng = SuppressionEngine(params)
    chunk = args.chunk or len(x)
    parts = [eng.push(x.slice(i, i + chunk)) for i in range(0, len(x), max(chunk, 1))]
    parts.append(eng.flush())
    out = np.concatenate(parts) if parts else np.empty(0)
    write_wav(args.output, out, x.sample_rate, args.encoding)
    for line in _summarize(eng.events, x.sample_rate):
        print(line)
    if args.events:
        with open(args.events, "w", encoding="utf-8") as fp:
            write_events(eng.events, fp)

    v = read_wav(args.reference_speech).samples if args.reference_speech else None
    g = read_wav(args.reference_noise).samples if args.reference_noise else None
    if g is not None and g.size != out.size or v is not None and v.size != out.size:
        raise ScanCleanError("reference files must have the same length as the input")
    if g is not None and v is None:
        print(f"NS = {noise_suppression_db(g, x.samples - out):.2f} dB")
    elif g is not None and v is not None:
        mask = utterance_mask(v, params.frame_len_N)
        print(f"SNR = {snr_db(v, g):.2f} dB")
        print(f"ISNR (utterance) = {isnr_db(g[mask], v[mask], out[mask]):.2f} dB")
        if (~mask).any():
            print(f"NS (non-utterance) = {noise_suppression_db(g[~mask], (x.samples - out)[~mask]):.2f} dB")
    if args.plot:
        from .plotting import plot_denoise

        plot_denoise(x.samples, out, x.sample_rate, args.plot)
    return 0


def cmd_simulate(args):
    base = _params(args, SIM_BASE_PARAMS)
    spec = SweepSpec(
        snr_list=args.snr_list,
        weightings=args.weighting,
        alphas=args.sweep_alpha,
        theta_rms_list=args.sweep_theta_rms,
        n_offsets=args.offsets,
        seeds=args.seeds,
        duration_s=args.duration,
        params=base,
    )
    done = [0]
    total = len(spec.snr_list) * len(spec.weightings) * len(spec.alphas) * len(
        spec.theta_rms_list) * spec.n_offsets * len(spec.seeds)

    def progress(_row):
        done[0] += 1
        if done[0] % 50 == 0 or done[0] == total:
            log.info("simulated %d/%d", done[0], total)

    report = run_sweep(spec, progress)
    sidecar = report.write_csv(args.out)
    print(f"wrote {len(report.rows)} rows to {args.out} (metadata {sidecar})")
    for snr in spec.snr_list:
        for wk in spec.weightings:
            print(f"SNR {snr:+.1f} dB  {wk.value:<6}  mean ISNR {report.mean_isnr(snr_db_in=snr, weighting_kind=wk.value):.2f} dB")
    if not args.no_plot:
        from .plotting import plot_isnr_vs_snr

        fig = plot_isnr_vs_snr(report, Path(args.out).with_suffix(".png"))
        print(f"figure {fig}")
    return 0


def cmd_synth(args):
    model = load_noise_model(args.model) if args.model else NoiseModel()
    if args.seed is not None:
        model = NoiseModel(model.period_s, model.jitter_s, model.pulse_spec, model.background_level, args.seed)
    g = gen_gradient_noise(model, args.duration, args.sample_rate)
    clipped = write_wav(args.out, g, args.sample_rate, args.encoding)
    print(f"wrote {g.size} samples of noise to {args.out}" + (f" ({clipped} clipped)" if clipped else ""))
    if args.utterance_out:
        v = gen_test_utterance(args.utterance_duration, args.sample_rate, model.seed)
        write_wav(args.utterance_out, v, args.sample_rate, args.encoding)
        print(f"wrote {v.size} samples of speech to {args.utterance_out}")
    return 0


def cmd_psd(args):
    x = read_wav(args.input)
    freqs, psd = welch_psd(x, window_s=args.window, overlap_frac=args.overlap)
    with open(args.out, "w", newline="", encoding="utf-8") as fp:
        writer = csv.writer(fp, lineterminator="\r\n")
        writer.writerow(("frequency_hz", "power_density"))
        writer.writerows((repr(float(f)), repr(float(p))) for f, p in zip(freqs, psd))
    print(f"wrote {freqs.size} bins to {args.out}")
    if not args.no_plot:
        from .plotting import plot_psd

        fig = plot_psd(freqs, psd, Path(args.out).with_suffix(".png"), fmax=args.fmax)
        print(f"figure {fig}")
    return 0


def cmd_latency(args):
    params = _params(args)
    print(f"{params.tau} samples ({params.tau_ms:.1f} ms)")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="scanclean", description="Scanner noise suppression for recorded speech.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("denoise", help="suppress scanner noise in a mono WAV file")
    d.add_argument("input")
    d.add_argument("output")
    d.add_argument("--config")
    d.add_argument("--reference-speech", help="clean speech, same length as input")
    d.add_argument("--reference-noise", help="noise alone, same length as input")
    d.add_argument("--events", help="write the event log as JSON lines")
    d.add_argument("--chunk", type=int, default=0, help="push this many samples at a time")
    d.add_argument("--encoding", choices=("pcm16", "float32"), default="pcm16")
    d.add_argument("--plot", help="write waveform/spectrogram figure here")
    d.set_defaults(func=cmd_denoise)

    s = sub.add_parser("simulate", help="run the synthetic ISNR sweep")
    s.add_argument("--snr-list", type=_floats, default=(-20.0, -5.0))
    s.add_argument("--weighting", type=_weightings, default=(WeightingKind.ZERO, WeightingKind.LINEAR))
    s.add_argument("--sweep-alpha", type=_floats, default=(0.5, 1.0, 2.0))
    s.add_argument("--sweep-theta-rms", type=_floats, default=(0.01, 0.02))
    s.add_argument("--offsets", type=int, default=4, help="onset phases per noise period")
    s.add_argument("--seeds", type=_ints, default=(0, 1, 2, 3, 4))
    s.add_argument("--duration", type=float, default=2.0, help="mixture length in seconds")
    s.add_argument("--config")
    s.add_argument("--out", required=True)
    s.add_argument("--no-plot", action="store_true")
    s.set_defaults(func=cmd_simulate)

    y = sub.add_parser("synth", help="generate synthetic scanner noise")
    y.add_argument("--model")
    y.add_argument("--out", required=True)
    y.add_argument("--duration", type=float, default=10.0)
    y.add_argument("--sample-rate", type=float, default=16000.0)
    y.add_argument("--seed", type=int)
    y.add_argument("--encoding", choices=("pcm16", "float32"), default="pcm16")
    y.add_argument("--utterance-out", help="also write a synthetic test utterance")
    y.add_argument("--utterance-duration", type=float, default=0.6)
    y.set_defaults(func=cmd_synth)

    q = sub.add_parser("psd", help="Welch power spectral density of a WAV file")
    q.add_argument("input")
    q.add_argument("--out", required=True)
    q.add_argument("--window", type=float, default=0.1, help="segment length in seconds")
    q.add_argument("--overlap", type=float, default=0.8)
    q.add_argument("--fmax", type=float)
    q.add_argument("--no-plot", action="store_true")
    q.set_defaults(func=cmd_psd)

    t = sub.add_parser("latency", help="print the processing delay")
    t.add_argument("--config")
    t.set_defaults(func=cmd_latency)
    return p


_NEG_LIST = re.compile(r"^-\d[\d.]*(,\s*-?\d[\d.]*)*$")


def _join_negative_values(argv):
    # argparse reads "-20,-5" as an option flag; glue it to its option
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEG_LIST.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_negative_values(argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ScanCleanError, InvalidModel, OSError, ValueError) as exc:
        print(f"scanclean: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
