import argparse

from matterwave.commands.base_command import BaseCommand
from matterwave.models import units
from matterwave.models.core_model import detection_ratio
from matterwave.utils.json_utils import to_json_string


class PhysicalCommand(BaseCommand):
    name = "physical"
    help = "由SI物理量计算 E0、V_g、βE0、t_D 与探测比"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--mass", type=float, required=True, help="kg")
        parser.add_argument("--wavelength", type=float, required=True, help="m")
        parser.add_argument("--aperture-radius", type=float, required=True, help="m")
        parser.add_argument("--length-param", type=float, required=True, help="m")
        parser.add_argument("--temperature", type=float, required=True, help="K")
        parser.add_argument("--screen-distance", type=float, required=True, help="m")

    def execute(self, args: argparse.Namespace) -> str:
        setup = units.PhysicalSetup(
            mass=args.mass,
            wavelength=args.wavelength,
            aperture_radius=args.aperture_radius,
            length_param=args.length_param,
            temperature=args.temperature,
            screen_distance=args.screen_distance,
        )
        reduced = units.to_reduced(setup)
        document = {
            "setup": setup,
            "kinetic_energy_j": units.kinetic_energy(setup),
            "kinetic_energy_ev": units.kinetic_energy_ev(setup),
            "group_velocity": units.group_velocity(setup),
            "beta_e0": reduced.beta_e0,
            "t_d": reduced.t_d,
            "decoherence_timescale": units.decoherence_timescale(setup),
            "flight_time": units.flight_time(setup),
            "detection_ratio": detection_ratio(reduced),
        }
        return to_json_string(document) + "\n"
