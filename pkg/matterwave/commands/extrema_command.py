import argparse
from typing import Optional

from matterwave.commands.base_command import BaseCommand
from matterwave.models.core_model import Extremum, find_extrema
from matterwave.utils.json_utils import to_json_string


def _relative(numeric: Optional[Extremum], approx: Optional[Extremum]):
    if numeric is None or approx is None:
        return None
    return {
        "t": (numeric.t - approx.t) / approx.t,
        "ratio": (numeric.ratio - approx.ratio) / approx.ratio,
    }


class ExtremaCommand(BaseCommand):
    name = "extrema"
    help = "寻找一条曲线的谷与峰，并与解析近似比较"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--beta-e0", type=float, required=True, help="βE0 >= 0")
        parser.add_argument("--t-max", type=float, default=None, help="扫描上限（默认50）")

    def execute(self, args: argparse.Namespace) -> str:
        report = find_extrema(args.beta_e0, args.t_max)
        document = {
            "beta_e0": report.beta_e0,
            "t_max": report.t_max,
            "monotonic": report.monotonic,
            "valley": report.valley,
            "peak": report.peak,
            "approx_valley": report.approx_valley,
            "approx_peak": report.approx_peak,
            "relative_difference": {
                "valley": _relative(report.valley, report.approx_valley),
                "peak": _relative(report.peak, report.approx_peak),
            },
        }
        return to_json_string(document) + "\n"
