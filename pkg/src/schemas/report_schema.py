from marshmallow import Schema, fields


class ZeroRecordSchema(Schema):
    index = fields.Int()
    x = fields.Float()
    z = fields.Float(allow_none=True)
    iterations = fields.Int()
    residual = fields.Float()
    dde = fields.Str(attribute='dde_label')


class RunReportSchema(Schema):
    records = fields.Method('dump_records')
    total_iterations = fields.Int()
    dde_used = fields.List(fields.Dict())
    warnings = fields.List(fields.Str())

    def dump_records(self, report):
        rows = ZeroRecordSchema(many=True).dump(report.records)
        for index, row in enumerate(rows):
            row['index'] = index
        return rows


class CompareRowSchema(Schema):
    zero_index = fields.Int()
    x = fields.Float()
    iterations = fields.List(fields.Int(allow_none=True))
    ratio = fields.Float(allow_none=True)


class NodeSchema(Schema):
    index = fields.Int()
    node = fields.Float()
