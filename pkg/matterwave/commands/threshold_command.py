import argparse

from matterwave.commands.base_command import BaseCommand
from matterwave.models.core_model import critical_beta_e0, monotonic_threshold
from matterwave.utils.json_utils import to_json_string


class ThresholdCommand(BaseCommand):
    name = "threshold"
    help = "谷-峰结构出现的临界 βE0"

    def execute(self, args: argparse.Namespace) -> str:
        h_star, t_star = critical_beta_e0()
        document = {
            "beta_e0_critical": monotonic_threshold(),
            "analytic_check": {"beta_e0_critical": h_star, "t_d": t_star},
        }
        return to_json_string(document) + "\n"
