import argparse

from matterwave.commands.base_command import BaseCommand
from matterwave.models.core_model import ReducedParams
from matterwave.models.density import profile


class DensityCommand(BaseCommand):
    name = "density"
    help = "列出衍射部分的位置密度与累积分布"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--beta-e0", type=float, required=True)
        parser.add_argument("--t-d", type=float, required=True)
        parser.add_argument("--points", type=int, default=201)

    def execute(self, args: argparse.Namespace) -> str:
        result = profile(ReducedParams(args.beta_e0, args.t_d), args.points)
        return f"# forward_weight={result.forward_weight:.17g}\n" + self.to_csv(result.to_frame())
