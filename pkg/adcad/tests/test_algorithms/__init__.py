"""
算法模块测试
"""
