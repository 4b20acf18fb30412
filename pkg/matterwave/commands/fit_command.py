import argparse

from matterwave.commands.base_command import BaseCommand
from matterwave.services.inference_service import InferenceService
from matterwave.utils.data_loader import MeasurementLoader
from matterwave.utils.errors import DomainError
from matterwave.utils.json_utils import to_json_string


class FitCommand(BaseCommand):
    name = "fit"
    help = "由测量的探测比拟合长度参数 L（可选同时拟合 βE0）"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--input", required=True, help="测量CSV: screen_distance_m,ratio[,sigma]")
        parser.add_argument("--mode", choices=["length", "length-beta"], default="length")
        parser.add_argument("--mass", type=float, help="kg（length 模式）")
        parser.add_argument("--wavelength", type=float, required=True, help="m")
        parser.add_argument("--aperture-radius", type=float, required=True, help="m")
        parser.add_argument("--temperature", type=float, help="K（length 模式）")
        parser.add_argument("--beta-e0", type=float, help="固定 βE0（length-beta 模式）")

    def execute(self, args: argparse.Namespace) -> str:
        data = MeasurementLoader(args.input).load_measurements()
        service = InferenceService()
        if args.mode == "length":
            if args.mass is None or args.temperature is None:
                raise DomainError("length 模式需要 --mass 与 --temperature")
            result = service.fit_length(data, args.mass, args.wavelength, args.aperture_radius, args.temperature)
        else:
            result = service.fit_length_and_beta(data, args.wavelength, args.aperture_radius, args.beta_e0)
        return to_json_string(result) + "\n"
