from matterwave.commands.base_command import BaseCommand
from matterwave.commands.density_command import DensityCommand
from matterwave.commands.extrema_command import ExtremaCommand
from matterwave.commands.fit_command import FitCommand
from matterwave.commands.mc_command import MonteCarloCommand
from matterwave.commands.physical_command import PhysicalCommand
from matterwave.commands.sweep_command import SweepCommand
from matterwave.commands.threshold_command import ThresholdCommand

# 子命令注册表：命令名 -> 命令类
COMMANDS = {
    command.name: command
    for command in (SweepCommand, ExtremaCommand, ThresholdCommand, DensityCommand,
                    MonteCarloCommand, FitCommand, PhysicalCommand)
}

__all__ = [
    'BaseCommand',
    'COMMANDS',
    'SweepCommand',
    'ExtremaCommand',
    'ThresholdCommand',
    'DensityCommand',
    'MonteCarloCommand',
    'FitCommand',
    'PhysicalCommand'
]
