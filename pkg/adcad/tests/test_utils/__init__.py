"""
工具模块测试
"""
