import argparse

from matterwave.commands.base_command import BaseCommand
from matterwave.models.core_model import ReducedParams, detection_ratio
from matterwave.services.montecarlo_service import MonteCarloService, RngState, expected_bin_counts
from matterwave.utils.json_utils import to_json_string


class MonteCarloCommand(BaseCommand):
    name = "mc"
    help = "蒙特卡洛采样估计探测比与剩余粒子分布"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--beta-e0", type=float, required=True)
        parser.add_argument("--t-d", type=float, required=True)
        parser.add_argument("--n", type=int, default=100000, help="粒子数")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--stream-id", type=int, default=0)
        parser.add_argument("--bins", type=int, default=50)
        parser.add_argument("--ks", action="store_true", help="附加 KS 检验")
        parser.add_argument("--progress", action="store_true", help="在stderr显示进度条")

    def execute(self, args: argparse.Namespace) -> str:
        p = ReducedParams(args.beta_e0, args.t_d)
        service = MonteCarloService(workers=args.workers, progress=args.progress)
        run = service.run(RngState(args.seed, args.stream_id), p, args.n, args.bins, ks=args.ks)

        expected = expected_bin_counts(p, args.n, run.histogram)
        histogram = [
            {"chi_lo": b.chi_lo, "chi_hi": b.chi_hi, "count": b.count, "expected": float(e)}
            for b, e in zip(run.histogram, expected)
        ]
        document = {
            "beta_e0": p.beta_e0,
            "t_d": p.t_d,
            "seed": args.seed,
            "stream_id": args.stream_id,
            "estimate": run.estimate,
            "analytic_ratio": detection_ratio(p),
            "histogram": histogram,
        }
        if run.ks is not None:
            document["ks"] = {
                "statistic": run.ks.statistic,
                "p_value": run.ks.p_value,
                "n_residual": run.ks.n_residual,
                "critical_value": run.ks.critical_value,
                "passed": run.ks.passed,
            }
        return to_json_string(document) + "\n"
