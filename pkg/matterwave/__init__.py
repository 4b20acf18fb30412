"""matterwave：有限温度下物质波孔径探测比的统计模型"""

__version__ = "0.1.0"
