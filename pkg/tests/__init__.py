# 单元测试
