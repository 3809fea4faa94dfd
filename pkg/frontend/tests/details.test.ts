import { readFileSync } from 'node:fs'
import { join } from 'node:path'
import { describe, expect, it } from 'vitest'
import { cardHtml, escapeHtml } from '../src/details.js'
import type { DetailCard } from '../src/types.js'

const card: DetailCard = JSON.parse(
  readFileSync(join(__dirname, 'fixtures', 'centrifugation.card.json'), 'utf-8'),
)

describe('cardHtml', () => {
  it('titles the card with the label and shows kind and id', () => {
    const html = cardHtml(card)
    expect(html).toContain('<h3>Centrifugation</h3>')
    expect(html).toContain('task')
    expect(html).toContain('t4')
  })

  it('renders one row per argument with display text', () => {
    const html = cardHtml(card)
    expect(html.match(/<tr>/g)).toHaveLength(5)
    expect(html).toContain('<th>Duration</th><td>10 min</td>')
    expect(html).toContain('<th>Role</th><td>Nurse</td>')
  })

  it('falls back to the node id for unlabelled nodes and empty bags', () => {
    const html = cardHtml({ node_id: 'p1.split', kind: 'parallel-split', label: '', arguments: [] })
    expect(html).toContain('<h3>p1.split</h3>')
    expect(html).toContain('no arguments')
  })

  it('escapes markup in every field', () => {
    const html = cardHtml({
      node_id: 't<1>',
      kind: 'task',
      label: '<script>alert(1)</script>',
      arguments: [{ name: 'a&b', kind: 'text', text: '"q"', value: null, unit: null }],
    })
    expect(html).not.toContain('<script>')
    expect(html).toContain('&lt;script&gt;')
    expect(html).toContain('a&amp;b')
    expect(html).toContain('&quot;q&quot;')
  })

  it('escapeHtml covers the five specials', () => {
    expect(escapeHtml(`&<>"'`)).toBe('&amp;&lt;&gt;&quot;&#39;')
  })
})
