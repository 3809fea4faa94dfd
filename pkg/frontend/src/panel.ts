// Configuration panel state: rows of (visual style, attribute, mapping)
// plus the text emitter.  Pure logic; the DOM wiring lives in main.ts.
// Client-side rules mirror server validation so conflicts are resolved
// before submission: one row per style, text attributes only discrete on
// position/scale styles, labels only direct.

import type { AttributeSummary, ConfigRow, MappingName, StyleName } from './types.js'

export const STYLES: StyleName[] = [
  'positionY', 'positionZ',
  'scaleX', 'scaleY', 'scaleZ',
  'labelFront', 'labelBack', 'labelLeft', 'labelRight', 'labelTop', 'labelBottom',
]

export const VIRTUAL_ATTRIBUTES: AttributeSummary[] = [
  { name: 'Name', kind: 'text', carriers: 0 },
  { name: 'Id', kind: 'text', carriers: 0 },
]

export function isLabelStyle(style: StyleName): boolean {
  return style.startsWith('label')
}

/** Attributes offered by the panel: model attributes plus the virtuals. */
export function attributeChoices(attributes: AttributeSummary[]): AttributeSummary[] {
  const named = new Set(attributes.map((a) => a.name))
  return [...attributes, ...VIRTUAL_ATTRIBUTES.filter((v) => !named.has(v.name))]
}

/** The mappings a (style, attribute kind) pair may select. */
export function mappingChoices(style: StyleName, kind: AttributeSummary['kind']): MappingName[] {
  if (isLabelStyle(style)) return ['direct']
  if (kind === 'text') return ['discrete']
  return ['direct', 'relative', 'discrete']
}

/** Styles not yet taken by another row (one attribute per style). */
export function freeStyles(rows: ConfigRow[], keep?: StyleName): StyleName[] {
  const taken = new Set(rows.map((r) => r.style))
  if (keep) taken.delete(keep)
  return STYLES.filter((s) => !taken.has(s))
}

export function addRow(
  rows: ConfigRow[],
  row: ConfigRow,
  kind: AttributeSummary['kind'],
): ConfigRow[] {
  if (rows.some((r) => r.style === row.style)) {
    throw new Error(`style ${row.style} is already configured`)
  }
  if (!mappingChoices(row.style, kind).includes(row.mapping)) {
    throw new Error(`mapping ${row.mapping} is not available for ${row.style} on a ${kind} attribute`)
  }
  return [...rows, row]
}

export function removeRow(rows: ConfigRow[], style: StyleName): ConfigRow[] {
  return rows.filter((r) => r.style !== style)
}

/** Emit the flat text config format the service reads. */
export function configText(rows: ConfigRow[]): string {
  return rows
    .map((row) => {
      const lanes = row.laneCount != null ? ` : ${row.laneCount}` : ''
      return `${row.style} = ${row.attribute} : ${row.mapping}${lanes}\n`
    })
    .join('')
}
