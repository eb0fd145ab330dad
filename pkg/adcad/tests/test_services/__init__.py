"""
服务模块测试
"""
