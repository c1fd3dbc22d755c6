from __future__ import annotations

import logging
import time
import uuid as uuid_factory
from fractions import Fraction

from interval_exchange.config.experiment_config import ExperimentConfig
from interval_exchange.dioph.akc import akc_measure
from interval_exchange.dioph.continued_fraction import (
    cf_expand,
    check_convergent_ineq,
    convergent_identities,
    recurrence_constant,
    type_estimate,
)
from interval_exchange.dioph.kesten import (
    chebyshev_batch,
    kesten_window_counts,
    three_distance_check,
)
from interval_exchange.dioph.liouville import liouville_from_scale
from interval_exchange.dioph.mixing import DEFAULT_CELLS, mixing_falsifier
from interval_exchange.experiment_status import ExperimentStatus
from interval_exchange.gauges.borel_cantelli import proximality_bc_measure
from interval_exchange.gauges.constants import (
    THETA_HIGH,
    THETA_LOW,
    estimate_constants,
    polarization_histogram,
)
from interval_exchange.gauges.decisiveness import (
    decisiveness_diagnostic,
    point_sequence,
)
from interval_exchange.gauges.discrepancy import (
    MAX_GRID,
    discrepancy,
    grid_discrepancy,
    omega_discrepancy,
    sampled_discrepancy,
)
from interval_exchange.gauges.scale_sequence import classify_scale, parse_scale
from interval_exchange.gauges.tau_entropy import (
    psi_summability,
    tau_entropy,
    tau_omega_bound,
)
from interval_exchange.gauges.traces import (
    GaugeKind,
    Metric,
    batch_traces,
    gauge_trace,
)
from interval_exchange.iet.delta_sets import delta_set
from interval_exchange.iet.iet import Iet, parse_iet
from interval_exchange.iet.keane import keane_certificate
from interval_exchange.iet_transformers.first_return_transformer import (
    FirstReturnTransformer,
)
from interval_exchange.iet_transformers.rotation_inducer import RotationInducer
from interval_exchange.induce.induced_map import floors_disjoint, partition_measure
from interval_exchange.induce.tower_book import (
    SequenceMode,
    generate_sequence,
    renormalized_iet,
    tower_book,
)
from interval_exchange.induce.towers import find_tower
from interval_exchange.reports import csv_report
from interval_exchange.reports.json_report import Report
from interval_exchange.reports.plots import PlotKind, emit_plot
from interval_exchange.utils.error import ConfigError, PropertyViolation
from interval_exchange.utils.exact_real import ONE, ExactReal
from interval_exchange.utils.literal_parser import parse_exact
from interval_exchange.utils.parallel import thread_count
from interval_exchange.utils.sampling import DYADIC_BITS, sample_pairs
from lab_logging.status_handler import ExperimentStateHandler, ExperimentStateLogger

DEFAULT_SCALE = "pow:1"
DEFAULT_ALPHA_GRID = "0.25,0.5,0.75,1,1.5,2"


class ExperimentOutcome:
    """
    What an experiment hands back to the runner: the JSON payload, an optional table
    for the CSV file and the failed property checks.
    """

    def __init__(
        self,
        payload: dict,
        header: list[str] | None = None,
        rows: list | None = None,
        violations: list[str] | None = None,
        plot_kind: str | None = None,
        asymptote: float | None = None,
    ):
        self.payload = payload
        self.header = header
        self.rows = rows
        self.violations = violations or []
        self.plot_kind = plot_kind
        self.asymptote = asymptote


def _parse_range(text: str) -> list[int]:
    """'6:14' (inclusive) or '1,2,5'."""
    if ":" in text:
        low, _, high = text.partition(":")
        return list(range(int(low), int(high) + 1))
    return [int(item) for item in text.split(",") if item.strip()]


def _parse_interval(text: str) -> tuple[ExactReal, ExactReal]:
    left, _, right = text.strip("[)( ").partition(",")
    if not right:
        raise ConfigError("Interval must read 'a,b', got '" + text + "'")
    return parse_exact(left), parse_exact(right)


class ExperimentRunner:
    def __init__(
        self,
        config: ExperimentConfig,
        run_id: str | None = None,
        status_handler: ExperimentStateHandler | None = None,
    ):
        self.config = config
        self.run_id = run_id if run_id else str(uuid_factory.uuid4())
        self.status_handler = status_handler
        self.__timing: dict[str, float] = {}
        self.__logger = logging.getLogger(__name__)

    def run(self) -> Report:
        """

        Dispatches the configured experiment, writes the CSV, JSON and SVG outputs
        named in the config and returns the report. Raises PropertyViolation after
        writing when a checked property failed.

        """

        experiments = {
            "gauge": self.__gauge,
            "constants": self.__constants,
            "tau": self.__tau,
            "discrepancy": self.__discrepancy,
            "cf": self.__cf,
            "liouville": self.__liouville,
            "akc": self.__akc,
            "kesten": self.__kesten,
            "chebyshev": self.__chebyshev,
            "induce": self.__induce,
            "tower": self.__tower,
            "towerbook": self.__towerbook,
            "mix3": self.__mix3,
            "bc-measure": self.__bc_measure,
            "decisive": self.__decisive,
        }

        self.__log_status(ExperimentStatus.RUNNING, "Experiment started.")
        outcome: ExperimentOutcome = self.__log_runtime(
            experiments[self.config.experiment],
            "Time used for " + self.config.experiment,
        )

        exit_code = 2 if outcome.violations else 0
        report = Report(self.config.echo(), outcome.payload, exit_code)
        if outcome.violations:
            report.payload = {**outcome.payload, "violations": outcome.violations}

        output = self.config.output
        if output.csv and outcome.header is not None:
            self.__log_runtime(
                csv_report.write_table,
                "Time used to write the table",
                output.csv,
                outcome.header,
                outcome.rows,
            )
            if output.svg and outcome.plot_kind is not None:
                self.__log_runtime(
                    emit_plot,
                    "Time used to render the plot",
                    output.csv,
                    outcome.plot_kind,
                    output.svg,
                    asymptote=outcome.asymptote,
                )

        if outcome.violations:
            self.__log_status(ExperimentStatus.VIOLATED, "Experiment finished.")
        else:
            self.__log_status(ExperimentStatus.SUCCESS, "Experiment finished.")

        report.timing = dict(self.__timing)
        if self.status_handler is not None:
            report.steps = self.status_handler.steps(self.run_id)
            self.status_handler.remove_status(self.run_id)
        if output.report:
            report.write(output.report)

        if outcome.violations:
            raise PropertyViolation(outcome.violations, report)
        return report

    def __log_status(self, status: str, message: str, payload: dict | None = None):
        self.__logger.log(
            ExperimentStateLogger.REPORTABLE,
            message,
            {"run_id": self.run_id, "status": status, "payload": payload},
        )

    def __log_runtime(
        self,
        function,
        log_string="Time used",
        *args,
        **kwargs,
    ):
        """
        Logs the time it takes to run the given function.
        """
        start = time.time()
        results = function(*args, **kwargs)
        seconds = round(time.time() - start, 2)
        self.__timing[log_string] = seconds
        self.__logger.log(
            ExperimentStateLogger.REPORTABLE,
            log_string + ": %ss" % seconds,
            {"run_id": self.run_id, "status": ExperimentStatus.RUNNING},
        )
        return results

    # helpers

    def __iet(self) -> Iet:
        if not self.config.target:
            raise ConfigError("This experiment needs a target map", field="target")
        return parse_iet(self.config.target)

    def __alpha(self) -> ExactReal:
        target = self.config.target.strip()
        if self.config.has("alpha"):
            target = self.config.get_str("alpha")
        if not target:
            raise ConfigError("This experiment needs a rotation number", field="target")
        kind, _, rest = target.partition(":")
        if rest and kind.strip().lower() == "rot":
            target = rest.partition("=")[2]
        return parse_exact(target)

    def __scale(self, key: str = "scale", default: str = DEFAULT_SCALE):
        return parse_scale(self.config.get_str(key, default))

    def __metric(self) -> str:
        metric = self.config.get_str("metric", Metric.INTERVAL)
        if metric not in (Metric.INTERVAL, Metric.CIRCLE):
            raise ConfigError(
                "Unknown metric '" + metric + "'", field="parameters.metric"
            )
        return metric

    def __kind(self, default: str = GaugeKind.RHO) -> str:
        kind = self.config.get_str("kind", default)
        if kind not in GaugeKind.ALL:
            raise ConfigError(
                "Unknown gauge kind '" + kind + "'", field="parameters.kind"
            )
        return kind

    # experiments

    def __gauge(self) -> ExperimentOutcome:
        iet = self.__iet()
        kind = self.__kind()
        s = self.__scale()
        metric = self.__metric()
        horizons = self.config.horizon_list()
        exact = self.config.exact_mode

        if self.config.has("x"):
            y = parse_exact(self.config.get_str("y")) if self.config.has("y") else None
            traces = [
                gauge_trace(
                    kind,
                    iet,
                    s,
                    parse_exact(self.config.get_str("x")),
                    y,
                    horizons=horizons,
                    metric=metric,
                    exact=exact,
                )
            ]
        elif exact:
            pairs = sample_pairs(self.config.seed, self.config.get_int("pairs", 1))
            traces = [
                gauge_trace(
                    kind,
                    iet,
                    s,
                    Fraction(x, 2**DYADIC_BITS),
                    None if kind == GaugeKind.RHO else Fraction(y, 2**DYADIC_BITS),
                    horizons=horizons,
                    metric=metric,
                    exact=True,
                    sample_id=sample_id,
                )
                for sample_id, (x, y) in enumerate(pairs)
            ]
        else:
            pairs = sample_pairs(self.config.seed, self.config.get_int("pairs", 1))
            traces = batch_traces(kind, iet, s, pairs, horizons, metric=metric)

        rows = []
        for trace in sorted(traces, key=lambda t: t.sample_id):
            rows.extend(trace.rows(exact))

        payload = {
            "kind": kind,
            "exact": exact,
            "iet": iet.to_json(),
            "scale": s.spec(),
            "scale_flags": classify_scale(s).to_json(),
            "metric": metric,
            "horizons": horizons,
            "samples": len(traces),
            "bits": DYADIC_BITS,
            "traces": [trace.to_json() for trace in traces],
        }
        asymptote = None
        if self.config.has("asymptote"):
            asymptote = float(parse_exact(self.config.get_str("asymptote")))
        return ExperimentOutcome(
            payload,
            csv_report.TRACE_HEADER,
            rows,
            plot_kind=self.config.get_str("plot", PlotKind.TRACE),
            asymptote=asymptote,
        )

    def __constants(self) -> ExperimentOutcome:
        iet = self.__iet()
        metric = self.__metric()
        pairs = sample_pairs(self.config.seed, self.config.get_int("pairs", 200))
        alphas = [float(a) for a in self.config.get_list("alphas", DEFAULT_ALPHA_GRID)]
        kinds = self.config.get_list("kinds", ",".join(GaugeKind.ALL))

        estimate = estimate_constants(
            iet, pairs, alphas, self.config.horizon, kinds=kinds, metric=metric
        )
        payload = {
            "iet": iet.to_json(),
            "metric": metric,
            "constants": estimate.to_json(),
        }

        rows = []
        for kind in kinds:
            for alpha, below, above in zip(
                estimate.alpha_grid, estimate.below[kind], estimate.above[kind]
            ):
                rows.append([kind, alpha, below, above])

        if self.config.has("histogram_scale"):
            kind = self.__kind(GaugeKind.PSI)
            histogram = polarization_histogram(
                kind,
                iet,
                self.__scale("histogram_scale"),
                pairs,
                self.config.horizon_list(),
                metric=metric,
            )
            summary = histogram.to_json()
            summary["fraction_below"] = histogram.fraction_below(THETA_LOW)
            summary["fraction_above"] = histogram.fraction_above(THETA_HIGH)
            payload["histogram"] = summary

        return ExperimentOutcome(
            payload, ["kind", "alpha", "fraction_below", "fraction_above"], rows
        )

    def __tau(self) -> ExperimentOutcome:
        iet = self.__iet()
        n_max = self.config.get_int("n_max", self.config.horizon)
        estimate = tau_entropy(iet, n_max)
        r = iet.canonical().r

        violations = [
            "card(Delta'_" + str(n) + ") = " + str(card) + " >= r^2 n^3"
            for n, card in estimate.table
            if r > 1 and card >= r**2 * n**3
        ]
        payload = {
            "iet": iet.to_json(),
            "tau": estimate.to_json(),
            "delta": [str(x) for x in sorted(delta_set(iet))],
            "keane": keane_certificate(
                iet, self.config.get_int("keane_depth", 200)
            ).to_json(),
        }
        if self.config.has("summability_scale"):
            payload["psi_summability"] = psi_summability(
                iet,
                self.__scale("summability_scale"),
                self.config.get_int("j_max", 10),
            ).to_json()
        if self.config.has("omega_n"):
            n_list = [int(n) for n in self.config.get_list("omega_n")]
            payload["tau_omega_bound"] = tau_omega_bound(iet, n_max, n_list)

        return ExperimentOutcome(
            payload,
            ["n", "card_delta_prime"],
            [[n, card] for n, card in estimate.table],
            violations,
            plot_kind=PlotKind.LOGLOG,
        )

    def __discrepancy(self) -> ExperimentOutcome:
        iet = self.__iet()
        mode = self.config.get_str("mode", "exact")
        payload = {"iet": iet.to_json(), "mode": mode}

        if mode == "omega":
            n_list = [
                int(n) for n in self.config.get_list("n_list", "16,32,64,128,256")
            ]
            windows = None
            if self.config.has("interval"):
                windows = [_parse_interval(self.config.get_str("interval"))]
            estimate = omega_discrepancy(iet, n_list, windows)
            payload["omega"] = estimate.to_json()
            return ExperimentOutcome(
                payload,
                ["n", "n_discrepancy"],
                [[n, n * value] for n, value in estimate.table],
                plot_kind=PlotKind.LOGLOG,
            )

        n = self.config.get_int("n", self.config.horizon)
        if mode == "grid":
            result = grid_discrepancy(iet, n, self.config.get_int("grid", MAX_GRID))
            payload["discrepancy"] = result.to_json()
        elif mode in ("exact", "sampled"):
            a, b = _parse_interval(self.config.get_str("interval", "0,1/2"))
            if mode == "exact":
                payload["discrepancy"] = discrepancy(iet, n, a, b).to_json()
            else:
                count = self.config.get_int("samples", 100)
                pairs = sample_pairs(self.config.seed, count)
                points = [Fraction(x, 2**DYADIC_BITS) for x, _ in pairs]
                value = sampled_discrepancy(iet, n, a, b, points)
                payload["discrepancy"] = {
                    "n": n,
                    "value": str(value),
                    "value_float": float(value),
                    "window": [str(a), str(b)],
                    "samples": len(points),
                    "mode": mode,
                }
        else:
            raise ConfigError(
                "Unknown discrepancy mode '" + mode + "'", field="parameters.mode"
            )
        return ExperimentOutcome(payload)

    def __cf(self) -> ExperimentOutcome:
        alpha = self.__alpha().frac()
        depth = self.config.get_int("depth", 10)
        cf = cf_expand(alpha, depth)

        inequality = check_convergent_ineq(cf, alpha)
        identities = convergent_identities(cf, alpha)
        violations = [
            "||alpha q_" + str(n) + "|| >= 1/q_" + str(n + 1)
            for n, ok in inequality
            if not ok
        ]
        for entry in identities:
            if not (entry["approximation"] and entry["determinant"]):
                violations.append("convergent identity at k = " + str(entry["k"]))

        payload = {
            **cf.to_json(),
            "convergent_inequality": [{"n": n, "holds": ok} for n, ok in inequality],
            "identities": identities,
        }
        if cf.period is not None:
            constant = recurrence_constant(cf)
            payload["recurrence_constant"] = str(constant)
            payload["recurrence_constant_float"] = float(constant)
        if self.config.has("type_n_max"):
            n_max = self.config.get_int("type_n_max")
            payload["type"] = type_estimate(alpha, n_max).to_json()

        rows = [[k, cf.a[k - 1] if k else 0, cf.p[k], cf.q[k]] for k in range(cf.depth)]
        return ExperimentOutcome(payload, ["k", "a", "p", "q"], rows, violations)

    def __liouville(self) -> ExperimentOutcome:
        s = self.__scale("scale", "pow:2")
        construction = liouville_from_scale(s, self.config.get_int("k", 3))
        violations = [
            "chain at k = " + str(k)
            for k, ok in enumerate(construction.chain_holds, start=1)
            if not ok
        ]
        payload = construction.to_json()
        if construction.feasible:
            payload["alpha"] = str(construction.alpha())
        return ExperimentOutcome(payload, violations=violations)

    def __akc(self) -> ExperimentOutcome:
        alpha = self.__alpha().frac()
        s = self.__scale("scale", "pow:2")
        c = Fraction(self.config.get_str("c", "1"))
        ks = _parse_range(self.config.get_str("k", "1:3"))
        cf = cf_expand(alpha, max(ks) + 1)

        measures = [akc_measure(alpha, k, c, s, cf=cf) for k in ks]
        violations = []
        for measure in measures:
            if not measure.bound_holds:
                violations.append("lambda(A_" + str(measure.k) + ") above the bound")
            if not measure.union_holds:
                violations.append(
                    "lambda(A_" + str(measure.k) + ") above the union bound"
                )
        payload = {
            "alpha": str(alpha),
            "scale": s.spec(),
            "c": str(c),
            "measures": [measure.to_json() for measure in measures],
        }
        rows = [
            [m.k, m.q_k, m.q_next, float(m.measure), float(m.bound)] for m in measures
        ]
        return ExperimentOutcome(
            payload, ["k", "q_k", "q_k_plus_1", "measure", "bound"], rows, violations
        )

    def __kesten(self) -> ExperimentOutcome:
        alpha = self.__alpha().frac()
        ms = _parse_range(self.config.get_str("m", "1:12"))
        a, b = _parse_interval(self.config.get_str("interval", "0,1/2"))

        violations = []
        entries = []
        for m in ms:
            verdict = three_distance_check(alpha, m)
            counts = kesten_window_counts(alpha, a, b, m)
            if not verdict.holds:
                violations.append("three distance at m = " + str(m))
            if not counts.holds:
                violations.append("window counts at m = " + str(m))
            entries.append(
                {
                    "m": m,
                    "three_distance": verdict.to_json(),
                    "window": counts.to_json(),
                }
            )
        rows = [
            [m, window["q"], window["b"], ";".join(map(str, window["count_set"]))]
            for m, window in ((e["m"], e["window"]) for e in entries)
        ]
        return ExperimentOutcome(
            {"alpha": str(alpha), "checks": entries},
            ["m", "q", "b", "count_set"],
            rows,
            violations,
        )

    def __chebyshev(self) -> ExperimentOutcome:
        alpha = self.__alpha().frac()
        pairs = sample_pairs(self.config.seed, self.config.get_int("samples", 100))
        points = [
            (Fraction(x, 2**DYADIC_BITS), Fraction(y, 2**DYADIC_BITS)) for x, y in pairs
        ]
        results = chebyshev_batch(alpha, points, self.config.horizon)
        violations = [
            "sample " + str(i) + ": running minimum " + str(r.running_min)
            for i, r in enumerate(results)
            if not r.holds
        ]
        rows = [
            [i, r.x, r.y, self.config.horizon, r.running_min, r.argmin]
            for i, r in enumerate(results)
        ]
        payload = {
            "alpha": str(alpha),
            "horizon": self.config.horizon,
            "results": [r.to_json() for r in results],
            "max_window_min": max(r.window_min for r in results),
        }
        return ExperimentOutcome(payload, csv_report.TRACE_HEADER, rows, violations)

    def __induce(self) -> ExperimentOutcome:
        iet = self.__iet()
        if self.config.has("rotation_b"):
            b = parse_exact(self.config.get_str("rotation_b"))
            induced_iet = RotationInducer(b).transform(iet)
            return ExperimentOutcome(
                {"base": iet.to_json(), "b": str(b), "iet": induced_iet.to_json()}
            )

        a, b = _parse_interval(self.config.get_str("interval"))
        transformer = FirstReturnTransformer(a, b)
        transformer.transform(iet)
        induced = transformer.last_induced

        disjoint = floors_disjoint(induced)
        measure = partition_measure(induced)
        violations = [] if disjoint else ["first-return floors overlap"]
        payload = {
            **induced.to_json(),
            "floors_disjoint": disjoint,
            "floors_measure": str(measure),
            "floors_cover": measure == ONE,
        }
        return ExperimentOutcome(payload, violations=violations)

    def __tower(self) -> ExperimentOutcome:
        iet = self.__iet()
        eps = parse_exact(self.config.get_str("eps", "1/10"))
        tower = find_tower(iet, eps)
        r = iet.canonical().r
        violations = []
        if not tower.floors_disjoint():
            violations.append("tower floors overlap")
        if tower.measure < ExactReal.rational(1, r):
            violations.append("tower measure below 1/r")
        payload = {
            **tower.to_json(),
            "r": r,
            "floors_disjoint": tower.floors_disjoint(),
            "floors_equal_length": tower.floors_equal_length(),
        }
        return ExperimentOutcome(payload, violations=violations)

    def __towerbook(self) -> ExperimentOutcome:
        seed_b = [int(x) for x in self.config.get_list("seed_b", "1,4,1,1")]
        rule = self.config.get_str("rule", "permuted")
        if self.config.has("m"):
            m = [int(x) for x in self.config.get_list("m")]
            n = [int(x) for x in self.config.get_list("n")]
        else:
            mode = self.config.get_str("mode", SequenceMode.WINDOW)
            m, n = generate_sequence(self.config.get_int("k", 4), seed_b, mode, rule)

        book = tower_book(m, n, seed_b, rule=rule)
        payload = book.to_json()
        if self.config.has("leb") and self.config.has("sing"):
            leb = [parse_exact(x).as_fraction() for x in self.config.get_list("leb")]
            sing = [parse_exact(x).as_fraction() for x in self.config.get_list("sing")]
            p = parse_exact(self.config.get_str("p", "1/2")).as_fraction()
            payload["renormalized_iet"] = renormalized_iet(leb, sing, p).to_json()
        return ExperimentOutcome(payload)

    def __mix3(self) -> ExperimentOutcome:
        alpha = self.__alpha()
        t = parse_exact(self.config.get_str("t"))
        ms = _parse_range(self.config.get_str("mrange", "6:14"))
        cells = self.config.get_int("cells", DEFAULT_CELLS)
        report = mixing_falsifier(alpha, t, ms, cells)

        violations = []
        for entry in report.times:
            if entry.min_missed < min(6, report.cells - 1):
                violations.append(
                    "only %s cells missed at m = %s" % (entry.min_missed, entry.m)
                )
            if len(entry.displacements) > 7 or not entry.rotation_times_consecutive:
                violations.append("displacements at m = " + str(entry.m))
        rows = [
            [e.m, e.q, e.b, e.time, e.min_missed, len(e.displacements)]
            for e in report.times
        ]
        rows.extend(
            [e["m"], e["q"], e["b"], e["time"], None, None] for e in report.skipped
        )
        rows.sort(key=lambda row: row[0])
        return ExperimentOutcome(
            report.to_json(),
            ["m", "q", "b", "time", "min_missed", "displacements"],
            rows,
            violations,
        )

    def __bc_measure(self) -> ExperimentOutcome:
        iet = self.__iet()
        metric = self.__metric()
        c = self.config.get_float("c", 0.6)
        samples = self.config.get_int("samples", 10**6)
        ns = [int(n) for n in self.config.get_list("n", "50,100,200")]

        estimates = [
            proximality_bc_measure(
                iet,
                n,
                c,
                samples,
                self.config.seed,
                metric=metric,
                workers=thread_count(),
            )
            for n in ns
        ]
        violations = [
            "estimate at n = " + str(e.n) + " exceeds the bound by more than 3 sigma"
            for e in estimates
            if not e.respects_bound
        ]
        rows = [[e.n, e.estimate, e.sigma, e.bound] for e in estimates]
        return ExperimentOutcome(
            {
                "iet": iet.to_json(),
                "c": c,
                "estimates": [e.to_json() for e in estimates],
            },
            ["n", "estimate", "sigma", "bound"],
            rows,
            violations,
        )

    def __decisive(self) -> ExperimentOutcome:
        points = point_sequence(self.config.get_str("points", "zero"))
        s = self.__scale()
        report = decisiveness_diagnostic(
            points,
            s,
            self.config.get_int("samples", 1000),
            self.config.horizon,
            self.config.seed,
        )
        rows = [[n, fraction] for n, fraction in zip(report.horizons, report.middle)]
        payload = {**report.to_json(), "scale": s.spec()}
        return ExperimentOutcome(payload, ["horizon", "middle_fraction"], rows)


def run(
    config: ExperimentConfig, status_handler: ExperimentStateHandler | None = None
) -> Report:
    return ExperimentRunner(config, status_handler=status_handler).run()
